//! Singular value decomposition by one-sided (Hestenes) Jacobi, and the
//! polar decomposition, trace norm, and operator norm derived from it.
//!
//! One-sided Jacobi orthogonalizes the columns of the input directly, which
//! keeps small singular values accurate — important here because trace norms
//! of products like `√ρ √σ` routinely involve nearly rank-deficient factors.

use crate::error::{Error, Result};
use crate::linalg::matrix::{inner, vec_norm, ComplexMatrix};
use crate::linalg::ortho::orthonormal_completion;
use num_complex::Complex64;

/// Sweep budget for the column-orthogonalization loop.
const MAX_SWEEPS: usize = 60;
/// Column pair (p, q) counts as orthogonal when
/// `|⟨a_p, a_q⟩| ≤ ORTHO_REL · ‖a_p‖ ‖a_q‖`.
const ORTHO_REL: f64 = 1e-14;
/// Columns with norm below `RANK_REL · max σ` are treated as zero.
const RANK_REL: f64 = 1e-14;

/// Full decomposition `X = U diag(singular) V†` with `U` (rows×rows) and
/// `V` (cols×cols) unitary and singular values sorted descending. The
/// singular-value list has `min(rows, cols)` entries.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular: Vec<f64>,
    pub v: ComplexMatrix,
}

/// Left polar decomposition `X = positive · unitary` of a square matrix,
/// with `positive = √(X X†)`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub positive: ComplexMatrix,
    pub unitary: ComplexMatrix,
}

/// One-sided Jacobi on a matrix with at least as many rows as columns.
fn svd_tall(x: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (x.rows(), x.cols());
    debug_assert!(m >= n);
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|j| x.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = vec_norm(&a[p]).powi(2);
                let aqq = vec_norm(&a[q]).powi(2);
                let apq = inner(&a[p], &a[q]);
                if apq.norm() <= ORTHO_REL * (app * aqq).sqrt() || apq.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                // Diagonalize the 2x2 Gram matrix [[app, apq], [conj, aqq]]
                // with the same phase-then-real-rotation used by the
                // eigensolver; applying the rotation to the columns makes
                // them orthogonal.
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();

                for i in 0..m {
                    let aip = a[p][i];
                    let aiq = a[q][i];
                    a[p][i] = aip * jpp + aiq * jqp;
                    a[q][i] = aip * jpq + aiq * jqq;
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * jpp + viq * jqp);
                    v.set(i, q, vip * jpq + viq * jqq);
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diag: f64::NAN,
            });
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = a.iter().map(|col| vec_norm(col)).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v = ComplexMatrix::from_fn(n, n, |r, k| v.get(r, order[k]));

    // Left singular vectors: normalized columns where σ > 0, then a
    // deterministic orthonormal completion for the null directions and the
    // remaining m - n columns.
    let cutoff = RANK_REL * singular.first().copied().unwrap_or(0.0);
    let numerical_rank = singular.iter().filter(|&&s| s > cutoff).count();
    let mut u = ComplexMatrix::zeros(m, m);
    for k in 0..numerical_rank {
        let col = &a[order[k]];
        for i in 0..m {
            u.set(i, k, col[i] / singular[k]);
        }
    }
    if numerical_rank < m {
        if numerical_rank == 0 {
            u = ComplexMatrix::identity(m);
        } else {
            let completion = orthonormal_completion(&u.block(0, 0, m, numerical_rank))?;
            u.set_block(0, numerical_rank, &completion);
        }
    }

    Ok(Svd { u, singular, v })
}

/// Full SVD of an arbitrary rectangular complex matrix.
pub fn svd(x: &ComplexMatrix) -> Result<Svd> {
    if x.rows() >= x.cols() {
        svd_tall(x)
    } else {
        // X = U Σ V†  ⇔  X† = V Σ U†.
        let flipped = svd_tall(&x.dagger())?;
        Ok(Svd {
            u: flipped.v,
            singular: flipped.singular,
            v: flipped.u,
        })
    }
}

/// Sum of singular values, `‖X‖₁ = Tr √(X†X)`.
pub fn trace_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(svd(x)?.singular.iter().sum())
}

/// Largest singular value, `‖X‖∞`.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(svd(x)?.singular.first().copied().unwrap_or(0.0))
}

/// Left polar decomposition of a square matrix: `X = P Ω` with
/// `P = √(X X†)` positive semi-definite and `Ω` unitary. For singular `X`
/// the unitary factor is completed deterministically on the null space.
pub fn polar_left(x: &ComplexMatrix) -> Result<PolarFactors> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch {
            context: format!("polar decomposition needs a square matrix, got {}x{}", x.rows(), x.cols()),
        });
    }
    let Svd { u, singular, v } = svd(x)?;
    // X = U Σ V† = (U Σ U†)(U V†).
    let positive = u
        .matmul(&ComplexMatrix::diag_re(&singular))
        .matmul(&u.dagger())
        .hermitize();
    let unitary = u.matmul(&v.dagger());
    Ok(PolarFactors { positive, unitary })
}
