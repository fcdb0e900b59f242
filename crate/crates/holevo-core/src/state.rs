//! Density matrices: validated quantum states with entropy, partial trace,
//! fidelity, and seeded random models.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, random_ginibre, random_unit_vector, trace_norm, ComplexMatrix, LabRng,
    PsdSpectral,
};
use num_complex::Complex64;

/// Absolute tolerance on `|Tr ρ − 1|`.
const TRACE_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix: Hermitian, unit trace, positive semi-definite
/// within tolerance. Optionally carries a bipartite split `dim_a × dim_b`
/// (subsystem A is the slow/major index) enabling partial traces.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    split: Option<(usize, usize)>,
}

impl DensityMatrix {
    /// Validate and wrap a matrix as a quantum state. The stored matrix is
    /// symmetrized to scrub round-off asymmetry.
    pub fn new(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotDensity {
                reason: format!("matrix is {}x{}, not square", mat.rows(), mat.cols()),
            });
        }
        if !mat.is_finite() {
            return Err(Error::NotDensity {
                reason: "matrix has non-finite entries".into(),
            });
        }
        let herm = mat.hermiticity_defect();
        if herm > tol.hermiticity {
            return Err(Error::NotDensity {
                reason: format!("Hermiticity defect {herm:.3e} exceeds {:.1e}", tol.hermiticity),
            });
        }
        let mat = mat.hermitize();
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity {
                reason: format!("trace {:.12} + {:.3e}i is not 1", trace.re, trace.im),
            });
        }
        let eig = hermitian_eig(&mat, tol)?;
        let min = *eig.values.last().expect("state is non-empty");
        if min < -tol.psd {
            return Err(Error::NotDensity {
                reason: format!("minimum eigenvalue {min:.3e} is below -{:.1e}", tol.psd),
            });
        }
        Ok(DensityMatrix { mat, split: None })
    }

    /// Validate a matrix as a bipartite state on ℂ^dim_a ⊗ ℂ^dim_b.
    pub fn with_split(
        mat: ComplexMatrix,
        dim_a: usize,
        dim_b: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        DensityMatrix::new(mat, tol)?.into_split(dim_a, dim_b)
    }

    /// Pure state `|ψ⟩⟨ψ|` from a state vector, which must be normalized.
    pub fn from_pure(psi: &[Complex64], tol: &Tolerances) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensity {
                reason: format!("state vector has norm² = {norm_sq:.12}"),
            });
        }
        DensityMatrix::new(ComplexMatrix::outer(psi, psi), tol)
    }

    /// Attach a bipartite split to an already validated state.
    pub fn into_split(mut self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != self.mat.rows() || dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "split {dim_a}x{dim_b} does not factor dimension {}",
                    self.mat.rows()
                ),
            });
        }
        self.split = Some((dim_a, dim_b));
        Ok(self)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Bipartite split `(dim_a, dim_b)` if one is attached.
    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    /// `Tr ρ²`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }

    /// Error unless the state is pure within `tol.psd`.
    pub fn require_pure(&self, tol: &Tolerances) -> Result<()> {
        let defect = 1.0 - self.purity();
        if defect.abs() > tol.psd.max(1e-10) * 10.0 {
            return Err(Error::NotPure { defect });
        }
        Ok(())
    }

    /// Eigenvalues of the state, descending, clamped to non-negative.
    pub fn spectrum(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        Ok(PsdSpectral::new(&self.mat, tol)?.values().to_vec())
    }

    /// Von Neumann entropy `S(ρ) = −Σ λ log λ` in base `tol.log_base`.
    pub fn von_neumann_entropy(&self, tol: &Tolerances) -> Result<f64> {
        Ok(entropy_of_spectrum(&self.spectrum(tol)?, tol.log_base))
    }

    /// Trace out one subsystem of a bipartite state.
    pub fn partial_trace(&self, keep: Subsystem, tol: &Tolerances) -> Result<DensityMatrix> {
        let (da, db) = self.split.ok_or(Error::NoBipartiteSplit)?;
        let idx = |a: usize, b: usize| a * db + b;
        let mat = match keep {
            Subsystem::A => ComplexMatrix::from_fn(da, da, |a, a2| {
                (0..db).map(|b| self.mat.get(idx(a, b), idx(a2, b))).sum()
            }),
            Subsystem::B => ComplexMatrix::from_fn(db, db, |b, b2| {
                (0..da).map(|a| self.mat.get(idx(a, b), idx(a, b2))).sum()
            }),
        };
        DensityMatrix::new(mat, tol)
    }

    /// Uhlmann fidelity `F(ρ, σ) = (Tr |√ρ √σ|)²`, clamped into [0, 1].
    pub fn fidelity(&self, other: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: format!("fidelity between dims {} and {}", self.dim(), other.dim()),
            });
        }
        let sr = PsdSpectral::new(&self.mat, tol)?.sqrt();
        let ss = PsdSpectral::new(&other.mat, tol)?.sqrt();
        let root_f = trace_norm(&sr.matmul(&ss))?;
        Ok((root_f * root_f).clamp(0.0, 1.0))
    }
}

/// Shannon-type entropy of a non-negative spectrum in the given base.
/// Zero eigenvalues contribute zero (the `0 log 0 = 0` convention).
pub fn entropy_of_spectrum(values: &[f64], base: f64) -> f64 {
    let ln_base = base.ln();
    -values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln() / ln_base)
        .sum::<f64>()
}

/// Random mixed state of the given rank: `ρ = G G† / Tr(G G†)` with `G`
/// a `dim × rank` Ginibre matrix.
pub fn random_density(
    dim: usize,
    rank: usize,
    rng: &mut LabRng,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = random_ginibre(dim, rank, rng);
    let gg = g.matmul(&g.dagger());
    let trace = gg.trace().re;
    DensityMatrix::new(gg.scale_re(1.0 / trace), tol)
}

/// Random pure state `|ψ⟩⟨ψ|` with `|ψ⟩` uniform on the sphere.
pub fn random_pure(dim: usize, rng: &mut LabRng, tol: &Tolerances) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&random_unit_vector(dim, rng), tol)
}

/// Random bipartite state on ℂ^dim_a ⊗ ℂ^dim_b of the given global rank.
pub fn random_bipartite(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    rng: &mut LabRng,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    random_density(dim_a * dim_b, rank, rng, tol)?.into_split(dim_a, dim_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, seeded_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit_of_entropy() {
        let rho = DensityMatrix::new(ComplexMatrix::diag_re(&[0.5, 0.5]), &tol()).unwrap();
        assert!((rho.von_neumann_entropy(&tol()).unwrap() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)], &tol()).unwrap();
        assert!(rho.von_neumann_entropy(&tol()).unwrap().abs() < 1e-12);
        rho.require_pure(&tol()).unwrap();
    }

    #[test]
    fn entropy_of_three_quarters_one_quarter() {
        // -(3/4 log2 3/4 + 1/4 log2 1/4), computed independently.
        let rho = DensityMatrix::new(ComplexMatrix::diag_re(&[0.75, 0.25]), &tol()).unwrap();
        let s = rho.von_neumann_entropy(&tol()).unwrap();
        assert!((s - 0.8112781244591328).abs() < 1e-13);
    }

    #[test]
    fn entropy_base_switch() {
        let mut t = tol();
        t.log_base = std::f64::consts::E;
        let rho = DensityMatrix::new(ComplexMatrix::diag_re(&[0.5, 0.5]), &t).unwrap();
        let s = rho.von_neumann_entropy(&t).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_trace_defect_and_negativity() {
        assert!(DensityMatrix::new(ComplexMatrix::diag_re(&[0.6, 0.6]), &tol()).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_re(&[1.2, -0.2]), &tol()).is_err());
        let skew = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(DensityMatrix::new(skew, &tol()).is_err());
    }

    #[test]
    fn bell_state_marginals_are_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        // (|00> + |11>)/sqrt(2) with composite index a*2 + b.
        let psi = vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let rho = DensityMatrix::from_pure(&psi, &tol())
            .unwrap()
            .into_split(2, 2)
            .unwrap();
        for keep in [Subsystem::A, Subsystem::B] {
            let marginal = rho.partial_trace(keep, &tol()).unwrap();
            let expected = ComplexMatrix::diag_re(&[0.5, 0.5]);
            assert!(marginal.mat().dist_frobenius(&expected) < 1e-13);
        }
    }

    #[test]
    fn product_state_marginals_are_the_factors() {
        let t = tol();
        let rho_a = DensityMatrix::new(ComplexMatrix::diag_re(&[0.7, 0.3]), &t).unwrap();
        let mut rng = seeded_rng(5);
        let rho_b = random_density(3, 3, &mut rng, &t).unwrap();
        let joint = DensityMatrix::with_split(kron(rho_a.mat(), rho_b.mat()), 2, 3, &t).unwrap();
        let ma = joint.partial_trace(Subsystem::A, &t).unwrap();
        let mb = joint.partial_trace(Subsystem::B, &t).unwrap();
        assert!(ma.mat().dist_frobenius(rho_a.mat()) < 1e-12);
        assert!(mb.mat().dist_frobenius(rho_b.mat()) < 1e-12);
    }

    #[test]
    fn partial_trace_requires_split() {
        let rho = DensityMatrix::new(ComplexMatrix::diag_re(&[0.5, 0.5]), &tol()).unwrap();
        assert!(matches!(
            rho.partial_trace(Subsystem::A, &tol()),
            Err(Error::NoBipartiteSplit)
        ));
    }

    #[test]
    fn fidelity_of_orthogonal_and_overlapping_pures() {
        let t = tol();
        let zero = DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)], &t).unwrap();
        let one = DensityMatrix::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)], &t).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let plus = DensityMatrix::from_pure(&[c(s, 0.0), c(s, 0.0)], &t).unwrap();
        assert!(zero.fidelity(&one, &t).unwrap().abs() < 1e-12);
        // |<0|+>|² = 1/2.
        assert!((zero.fidelity(&plus, &t).unwrap() - 0.5).abs() < 1e-12);
        assert!((zero.fidelity(&zero, &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_on_random_states() {
        let t = tol();
        let mut rng = seeded_rng(17);
        let a = random_density(3, 2, &mut rng, &t).unwrap();
        let b = random_density(3, 3, &mut rng, &t).unwrap();
        let fab = a.fidelity(&b, &t).unwrap();
        let fba = b.fidelity(&a, &t).unwrap();
        assert!((fab - fba).abs() < 1e-11);
        assert!((0.0..=1.0).contains(&fab));
    }

    #[test]
    fn random_models_are_valid_states() {
        let t = tol();
        let mut rng = seeded_rng(23);
        let mixed = random_density(4, 2, &mut rng, &t).unwrap();
        assert_eq!(mixed.dim(), 4);
        // Rank-2 state: two eigenvalues vanish.
        let spec = mixed.spectrum(&t).unwrap();
        assert!(spec[2].abs() < 1e-12 && spec[3].abs() < 1e-12);
        let pure = random_pure(3, &mut rng, &t).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        let bi = random_bipartite(2, 3, 4, &mut rng, &t).unwrap();
        assert_eq!(bi.split(), Some((2, 3)));
        assert!(random_density(3, 0, &mut rng, &t).is_err());
        assert!(random_density(3, 4, &mut rng, &t).is_err());
    }
}
