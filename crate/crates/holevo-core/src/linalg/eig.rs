//! Hermitian eigendecomposition via cyclic-by-row complex Jacobi rotations,
//! plus the PSD spectral functions (square root, pseudo-inverse, support
//! projector) built on top of it.
//!
//! Jacobi is quadratically convergent once rotations shrink, unconditionally
//! stable, and has no trouble with the clustered or zero eigenvalues that
//! rank-deficient density matrices produce. For the small dimensions this
//! crate works at, its O(n³) sweep cost is irrelevant.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use num_complex::Complex64;

/// Sweep budget before the solver reports failure.
const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to
/// the Frobenius norm of the input.
const OFF_DIAG_REL: f64 = 1e-13;

/// Eigendecomposition `H = V diag(values) V†` of a Hermitian matrix.
/// Eigenvalues are sorted in descending order; column `k` of `vectors` is
/// the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn off_diagonal_norm(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += h.get(r, c).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalize a Hermitian matrix. The input must pass the Hermiticity
/// check at `tol.hermiticity`; it is then symmetrized so the iteration works
/// on an exactly Hermitian operand.
pub fn hermitian_eig(h: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    h.require_hermitian(tol.hermiticity)?;
    let n = h.rows();
    let norm = h.frobenius_norm();
    let mut a = h.hermitize();
    let mut v = ComplexMatrix::identity(n);

    if norm == 0.0 {
        return Ok(HermitianEig { values: vec![0.0; n], vectors: v });
    }

    let threshold = OFF_DIAG_REL * norm;
    // Rotations below this size contribute nothing at the convergence
    // threshold and would only churn round-off.
    let skip = threshold / (n as f64 * n as f64);
    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;

    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a.get(p, q);
                if beta.norm() <= skip {
                    continue;
                }
                // Zero out the (p,q) entry. Factor the phase out of β so the
                // problem reduces to a real 2x2 rotation: with e^{iφ} = β/|β|,
                //   τ = (a_qq − a_pp) / (2|β|),
                //   t = sign(τ) / (|τ| + sqrt(1 + τ²)),  c = 1/sqrt(1+t²),  s = t·c,
                // and the unitary plane rotation has entries
                //   J_pp = c, J_pq = s, J_qp = −s·e^{−iφ}, J_qq = c·e^{−iφ}.
                let phase = beta / beta.norm();
                let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * beta.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();

                // A ← J† A J, applied as column then row updates.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * jpp + aiq * jqp);
                    a.set(i, q, aip * jpq + aiq * jqq);
                }
                for i in 0..n {
                    let api = a.get(p, i);
                    let aqi = a.get(q, i);
                    a.set(p, i, jpp.conj() * api + jqp.conj() * aqi);
                    a.set(q, i, jpq.conj() * api + jqq.conj() * aqi);
                }
                // Pin the rotated entries to their exact values.
                a.set(p, q, Complex64::ZERO);
                a.set(q, p, Complex64::ZERO);
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set(p, p, Complex64::new(app.re, 0.0));
                a.set(q, q, Complex64::new(aqq.re, 0.0));

                // V ← V J accumulates eigenvectors in the columns.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * jpp + viq * jqp);
                    v.set(i, q, vip * jpq + viq * jqq);
                }
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }

    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_diag: off_diagonal_norm(&a),
        });
    }

    // Sort eigenpairs descending.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| v.get(r, order[k]));

    debug_assert!(
        {
            let recon = vectors
                .matmul(&ComplexMatrix::diag_re(&values))
                .matmul(&vectors.dagger());
            recon.dist_frobenius(h) <= tol.eig.max(1e-12) * norm.max(1.0)
        },
        "eigendecomposition failed to reconstruct its input"
    );

    Ok(HermitianEig { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    let eig = hermitian_eig(h, tol)?;
    Ok(*eig.values.last().expect("matrix is non-empty"))
}

/// Spectral decomposition of a positive semi-definite matrix, exposing the
/// spectral functions the rest of the crate needs. Construction fails with
/// [`Error::NotPsd`] when an eigenvalue sits below `-tol.psd`; eigenvalues in
/// the round-off band `[-tol.psd, 0]` are clamped to zero.
#[derive(Debug, Clone)]
pub struct PsdSpectral {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl PsdSpectral {
    pub fn new(h: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let eig = hermitian_eig(h, tol)?;
        let min = *eig.values.last().expect("matrix is non-empty");
        if min < -tol.psd {
            return Err(Error::NotPsd { min_eig: min });
        }
        let values = eig.values.iter().map(|&v| v.max(0.0)).collect();
        Ok(PsdSpectral { values, vectors: eig.vectors })
    }

    /// Clamped (non-negative) eigenvalues, descending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.vectors
            .matmul(&ComplexMatrix::diag_re(&mapped))
            .matmul(&self.vectors.dagger())
    }

    /// Eigenvalue cutoff for rank decisions: `rank_tol` times the largest
    /// eigenvalue (or `rank_tol` itself for a zero matrix).
    fn cutoff(&self, rank_tol: f64) -> f64 {
        rank_tol * self.values.first().copied().unwrap_or(0.0).max(1e-300)
    }

    /// Number of eigenvalues above the rank cutoff.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let cut = self.cutoff(rank_tol);
        self.values.iter().filter(|&&v| v > cut).count()
    }

    /// Principal square root `H^{1/2}`.
    pub fn sqrt(&self) -> ComplexMatrix {
        self.apply(f64::sqrt)
    }

    /// Moore–Penrose pseudo-inverse, inverting only eigenvalues above the
    /// rank cutoff.
    pub fn pinv(&self, rank_tol: f64) -> ComplexMatrix {
        let cut = self.cutoff(rank_tol);
        self.apply(|v| if v > cut { 1.0 / v } else { 0.0 })
    }

    /// Pseudo-inverse of the square root, `(H^{1/2})⁺`.
    pub fn sqrt_pinv(&self, rank_tol: f64) -> ComplexMatrix {
        let cut = self.cutoff(rank_tol);
        self.apply(|v| if v > cut { 1.0 / v.sqrt() } else { 0.0 })
    }

    /// Pseudo-inverse of the square root with an absolute eigenvalue
    /// cutoff — for matrices derived by subtraction, whose noise floor is
    /// set by the scale of the parent problem rather than their own norm.
    pub fn sqrt_pinv_at(&self, cutoff: f64) -> ComplexMatrix {
        self.apply(|v| if v > cutoff { 1.0 / v.sqrt() } else { 0.0 })
    }

    /// Orthogonal projector onto the support (range) of the matrix.
    pub fn support(&self, rank_tol: f64) -> ComplexMatrix {
        let cut = self.cutoff(rank_tol);
        self.apply(|v| if v > cut { 1.0 } else { 0.0 })
    }
}

/// Principal square root of a PSD matrix.
pub fn matrix_sqrt(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    Ok(PsdSpectral::new(h, tol)?.sqrt())
}

/// Projector onto the support of a PSD matrix, with eigenvalues at or below
/// `rank_tol · λ_max` treated as zero.
pub fn support_projection(
    h: &ComplexMatrix,
    rank_tol: f64,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    Ok(PsdSpectral::new(h, tol)?.support(rank_tol))
}
