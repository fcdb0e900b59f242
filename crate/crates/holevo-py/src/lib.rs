//! Python bindings: density matrices, measurement channels, ensembles, and
//! the verification checks, with plain dicts for report values.

use holevo_core::blockpos;
use holevo_core::channel::{self, KrausChannel as CoreChannel};
use holevo_core::ensemble::{self, Ensemble as CoreEnsemble};
use holevo_core::linalg::{seeded_rng, ComplexMatrix};
use holevo_core::state::{DensityMatrix as CoreDensity, Subsystem};
use holevo_core::{Error, Tolerances};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn pyerr(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn default_tol() -> Tolerances {
    Tolerances::default()
}

fn to_matrix(rows: &[Vec<Complex64>]) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    if r == 0 {
        return Err(PyValueError::new_err("matrix must be non-empty"));
    }
    let c = rows[0].len();
    if c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("matrix rows must share one length"));
    }
    Ok(ComplexMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Trace-one PSD matrix, optionally carrying a bipartite split.
#[pyclass(name = "DensityMatrix", from_py_object)]
#[derive(Clone)]
struct PyDensity {
    inner: CoreDensity,
}

#[pymethods]
impl PyDensity {
    #[new]
    #[pyo3(signature = (matrix, dims = None))]
    fn new(matrix: Vec<Vec<Complex64>>, dims: Option<(usize, usize)>) -> PyResult<Self> {
        let tol = default_tol();
        let mut rho = CoreDensity::new(to_matrix(&matrix)?, &tol).map_err(pyerr)?;
        if let Some((a, b)) = dims {
            rho = rho.into_split(a, b).map_err(pyerr)?;
        }
        Ok(PyDensity { inner: rho })
    }

    /// Rank-one state |ψ⟩⟨ψ| from amplitudes (normalized if needed).
    #[staticmethod]
    fn from_pure(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(PyValueError::new_err("zero vector is not a state"));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        let inner = CoreDensity::from_pure(&psi, &default_tol()).map_err(pyerr)?;
        Ok(PyDensity { inner })
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.inner.mat())
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn split(&self) -> Option<(usize, usize)> {
        self.inner.split()
    }

    /// von Neumann entropy in bits.
    fn entropy(&self) -> PyResult<f64> {
        self.inner.von_neumann_entropy(&default_tol()).map_err(pyerr)
    }

    fn fidelity(&self, other: &PyDensity) -> PyResult<f64> {
        self.inner.fidelity(&other.inner, &default_tol()).map_err(pyerr)
    }

    /// Marginal on the named subsystem ("A" or "B"); needs a split.
    fn marginal(&self, subsystem: &str) -> PyResult<Self> {
        let which = match subsystem {
            "A" | "a" => Subsystem::A,
            "B" | "b" => Subsystem::B,
            _ => return Err(PyValueError::new_err("subsystem must be 'A' or 'B'")),
        };
        let inner = self
            .inner
            .partial_trace(which, &default_tol())
            .map_err(pyerr)?;
        Ok(PyDensity { inner })
    }

    fn __repr__(&self) -> String {
        match self.inner.split() {
            Some((a, b)) => format!("DensityMatrix(dim={}, split=({a}, {b}))", self.inner.dim()),
            None => format!("DensityMatrix(dim={})", self.inner.dim()),
        }
    }
}

/// Measurement channel given by Kraus operators {M_mu}.
#[pyclass(name = "KrausChannel", skip_from_py_object)]
#[derive(Clone)]
struct PyChannel {
    inner: CoreChannel,
}

#[pymethods]
impl PyChannel {
    #[new]
    fn new(kraus: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let ops = kraus
            .iter()
            .map(|m| to_matrix(m))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = CoreChannel::new(ops, None, &default_tol()).map_err(pyerr)?;
        Ok(PyChannel { inner })
    }

    /// Haar-seeded random channel with the given outcome count.
    #[staticmethod]
    fn random(dim: usize, num_kraus: usize, seed: u64) -> PyResult<Self> {
        let mut rng = seeded_rng(seed);
        let inner =
            CoreChannel::random(dim, num_kraus, &mut rng, &default_tol()).map_err(pyerr)?;
        Ok(PyChannel { inner })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn num_outcomes(&self) -> usize {
        self.inner.num_outcomes()
    }

    fn kraus(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.kraus().iter().map(from_matrix).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "KrausChannel(dim={}, outcomes={})",
            self.inner.dim(),
            self.inner.num_outcomes()
        )
    }
}

/// Probability-weighted list of states on one space.
#[pyclass(name = "Ensemble", skip_from_py_object)]
#[derive(Clone)]
struct PyEnsemble {
    inner: CoreEnsemble,
}

#[pymethods]
impl PyEnsemble {
    #[new]
    fn new(entries: Vec<(f64, PyDensity)>) -> PyResult<Self> {
        let (probs, states): (Vec<f64>, Vec<CoreDensity>) = entries
            .into_iter()
            .map(|(p, rho)| (p, rho.inner))
            .unzip();
        let inner = CoreEnsemble::from_parts(&probs, states).map_err(pyerr)?;
        Ok(PyEnsemble { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn probabilities(&self) -> Vec<f64> {
        self.inner.probabilities()
    }

    fn average_state(&self) -> PyResult<PyDensity> {
        let inner = self.inner.average_state(&default_tol()).map_err(pyerr)?;
        Ok(PyDensity { inner })
    }

    /// Holevo quantity chi in bits.
    fn holevo_chi(&self) -> PyResult<f64> {
        Ok(self.inner.holevo(&default_tol()).map_err(pyerr)?.chi)
    }

    /// The square-root-fidelity correlation matrix as real entries.
    fn correlation_matrix(&self) -> PyResult<Vec<Vec<f64>>> {
        let corr =
            ensemble::CorrelationMatrix::from_ensemble(&self.inner, &default_tol()).map_err(pyerr)?;
        let m = corr.mat();
        Ok((0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).re).collect())
            .collect())
    }

    fn correlation_min_eig(&self) -> PyResult<f64> {
        let corr =
            ensemble::CorrelationMatrix::from_ensemble(&self.inner, &default_tol()).map_err(pyerr)?;
        Ok(corr.min_eigenvalue())
    }

    fn __repr__(&self) -> String {
        format!("Ensemble(n={}, dim={})", self.inner.len(), self.inner.dim())
    }
}

/// Measure subsystem B of `state` and return the induced ensemble on A
/// together with the outcome probabilities.
#[pyfunction]
fn induce_ensemble(state: &PyDensity, channel: &PyChannel) -> PyResult<(PyEnsemble, Vec<f64>)> {
    let induced =
        ensemble::induce_ensemble(&state.inner, &channel.inner, &default_tol()).map_err(pyerr)?;
    Ok((
        PyEnsemble {
            inner: induced.ensemble,
        },
        induced.raw_probabilities,
    ))
}

/// Accessible-information bound check: chi against both marginal entropies.
#[pyfunction]
fn check_theorem1<'py>(
    py: Python<'py>,
    state: &PyDensity,
    channel: &PyChannel,
) -> PyResult<Bound<'py, PyDict>> {
    let rep =
        ensemble::check_theorem1(&state.inner, &channel.inner, &default_tol()).map_err(pyerr)?;
    let out = PyDict::new(py);
    out.set_item("chi", rep.chi)?;
    out.set_item("entropy_a", rep.entropy_a)?;
    out.set_item("entropy_b", rep.entropy_b)?;
    out.set_item("margin", rep.margin)?;
    out.set_item("barycenter_residual", rep.barycenter_residual)?;
    out.set_item("outcomes_kept", rep.outcomes_kept)?;
    Ok(out)
}

/// Three-state extension check: chain condition, block state, and the
/// correlation-entropy bound.
#[pyfunction]
fn check_theorem2<'py>(py: Python<'py>, ensemble: &PyEnsemble) -> PyResult<Bound<'py, PyDict>> {
    let rep = ensemble::check_theorem2(&ensemble.inner, &default_tol()).map_err(pyerr)?;
    let out = PyDict::new(py);
    out.set_item("chi", rep.chi)?;
    out.set_item("correlation_entropy", rep.correlation_entropy)?;
    out.set_item("margin", rep.margin)?;
    out.set_item("residual_uvw", rep.residual_uvw)?;
    out.set_item("condition_met", rep.condition_met)?;
    out.set_item("corr_min_eig", rep.corr_min_eig)?;
    out.set_item("block_min_eig", rep.block_min_eig)?;
    out.set_item("barycenter_marginal_residual", rep.barycenter_marginal_residual)?;
    out.set_item("correlation_marginal_residual", rep.correlation_marginal_residual)?;
    Ok(out)
}

/// Seeded search for an ensemble with an indefinite correlation matrix.
/// Returns None when every trial stays PSD.
#[pyfunction]
fn counterexample_search<'py>(
    py: Python<'py>,
    n: usize,
    dim: usize,
    trials: u64,
    seed: u64,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let found =
        ensemble::counterexample_search(n, dim, trials, seed, &default_tol()).map_err(pyerr)?;
    match found {
        None => Ok(None),
        Some(witness) => {
            let out = PyDict::new(py);
            out.set_item("trial_index", witness.trial_index)?;
            out.set_item("min_eig", witness.min_eig)?;
            out.set_item("rayleigh", witness.rayleigh)?;
            out.set_item("eigenvector", witness.eigenvector.clone())?;
            out.set_item(
                "ensemble",
                PyEnsemble {
                    inner: witness.ensemble,
                }
                .into_pyobject(py)?,
            )?;
            Ok(Some(out))
        }
    }
}

/// Unitary-triple biconditional: the structured block is PSD exactly when
/// V = UW.
#[pyfunction]
fn lemma2_check<'py>(
    py: Python<'py>,
    u: Vec<Vec<Complex64>>,
    v: Vec<Vec<Complex64>>,
    w: Vec<Vec<Complex64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = blockpos::lemma2_check(
        &to_matrix(&u)?,
        &to_matrix(&v)?,
        &to_matrix(&w)?,
        &default_tol(),
    )
    .map_err(pyerr)?;
    let out = PyDict::new(py);
    out.set_item("min_eig", rep.min_eig)?;
    out.set_item("residual_vuw", rep.residual_vuw)?;
    out.set_item("is_psd", rep.is_psd)?;
    out.set_item("condition_holds", rep.condition_holds)?;
    out.set_item("consistent", rep.consistent)?;
    Ok(out)
}

/// Dilate a channel to a projective measurement and report the structural
/// residuals (compression, projector law, completeness).
#[pyfunction]
fn naimark_residuals<'py>(py: Python<'py>, channel: &PyChannel) -> PyResult<Bound<'py, PyDict>> {
    let tol = default_tol();
    let dilation = channel::naimark_dilate(&channel.inner, &tol).map_err(pyerr)?;
    let compression = channel
        .inner
        .kraus()
        .iter()
        .enumerate()
        .map(|(mu, m)| {
            let povm = m.dagger().matmul(m);
            dilation.compress(mu).dist_frobenius(&povm)
        })
        .fold(0.0f64, f64::max);
    let dim_bc = channel.inner.dim() * channel.inner.num_outcomes();
    let mut projector = 0.0f64;
    let mut total = ComplexMatrix::zeros(dim_bc, dim_bc);
    for p in dilation.projectors() {
        projector = projector
            .max(p.matmul(p).dist_frobenius(p))
            .max(p.dagger().dist_frobenius(p));
        total = total.add(p);
    }
    let completeness = total.dist_frobenius(&ComplexMatrix::identity(dim_bc));
    let out = PyDict::new(py);
    out.set_item("compression", compression)?;
    out.set_item("projector", projector)?;
    out.set_item("completeness", completeness)?;
    out.set_item("dilated_dim", dim_bc)?;
    Ok(out)
}

#[pymodule]
fn holevo_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensity>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_function(wrap_pyfunction!(induce_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(check_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(check_theorem2, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_search, m)?)?;
    m.add_function(wrap_pyfunction!(lemma2_check, m)?)?;
    m.add_function(wrap_pyfunction!(naimark_residuals, m)?)?;
    Ok(())
}
