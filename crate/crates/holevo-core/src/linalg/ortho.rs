//! Orthonormalization: modified Gram–Schmidt QR and completion of an
//! isometry's columns to a full orthonormal basis.

use crate::error::{Error, Result};
use crate::linalg::matrix::{inner, vec_norm, ComplexMatrix};
use num_complex::Complex64;

/// Columns whose post-projection norm falls below this fraction of their
/// original norm are treated as linearly dependent.
const DEPENDENCE_CUTOFF: f64 = 1e-12;

fn project_out(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for q in basis {
        let coeff = inner(q, v);
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= coeff * qi;
        }
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Thin QR by modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Requires the columns of `a` to be linearly independent; returns
/// `(Q, R)` with `A = Q R`, `Q` of the same shape with orthonormal columns
/// and `R` square upper-triangular with positive diagonal.
pub fn qr_mgs(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (rows, cols) = (a.rows(), a.cols());
    if cols > rows {
        return Err(Error::DimensionMismatch {
            context: format!("qr_mgs needs rows >= cols, got {rows}x{cols}"),
        });
    }
    let mut q_cols: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    let mut r = ComplexMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v = a.column(j);
        let original = vec_norm(&v).max(f64::MIN_POSITIVE);
        // Two MGS passes: the second removes the O(eps * condition) residue
        // the first leaves behind, keeping Q orthonormal to machine precision.
        for _pass in 0..2 {
            for (i, q) in q_cols.iter().enumerate() {
                let coeff = inner(q, &v);
                r.set(i, j, r.get(i, j) + coeff);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= coeff * qi;
                }
            }
        }
        let norm = normalize(&mut v);
        if norm < DEPENDENCE_CUTOFF * original {
            return Err(Error::CompletionFailure {
                reason: format!("column {j} is linearly dependent on earlier columns"),
            });
        }
        r.set(j, j, Complex64::new(norm, 0.0));
        q_cols.push(v);
    }
    let q = ComplexMatrix::from_fn(rows, cols, |i, j| q_cols[j][i]);
    Ok((q, r))
}

/// Extend the orthonormal columns of `iso` (a `dim x k` isometry) to a full
/// orthonormal basis, returning the `dim x (dim - k)` matrix of new columns.
///
/// The completion is deterministic: standard basis vectors are swept in
/// index order and kept whenever they retain independent mass.
pub fn orthonormal_completion(iso: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (dim, k) = (iso.rows(), iso.cols());
    if k >= dim {
        return Err(Error::DimensionMismatch {
            context: format!("cannot complete {k} columns in dimension {dim}"),
        });
    }
    let gram_defect = iso.dagger().matmul(iso).dist_frobenius(&ComplexMatrix::identity(k));
    if gram_defect > 1e-8 {
        return Err(Error::NotOrthonormal { residual: gram_defect });
    }
    let mut basis: Vec<Vec<Complex64>> = (0..k).map(|j| iso.column(j)).collect();
    let mut fresh: Vec<Vec<Complex64>> = Vec::with_capacity(dim - k);
    for e in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![Complex64::ZERO; dim];
        v[e] = Complex64::ONE;
        project_out(&basis, &mut v);
        project_out(&basis, &mut v); // re-orthogonalize
        let norm = normalize(&mut v);
        if norm > 1e-8 {
            basis.push(v.clone());
            fresh.push(v);
        }
    }
    if basis.len() != dim {
        return Err(Error::CompletionFailure {
            reason: format!("found only {} of {dim} basis vectors", basis.len()),
        });
    }
    Ok(ComplexMatrix::from_fn(dim, dim - k, |i, j| fresh[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qr_reconstructs_and_q_is_orthonormal() {
        let a = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(1.0, 0.5), c(2.0, 0.0), c(0.0, -1.0),
                c(0.0, 1.0), c(1.0, 1.0), c(3.0, 0.0),
                c(2.0, 0.0), c(0.0, 0.0), c(1.0, 2.0),
            ],
        )
        .unwrap();
        let (q, r) = qr_mgs(&a).unwrap();
        assert!(q.matmul(&r).dist_frobenius(&a) < 1e-13);
        let gram = q.dagger().matmul(&q);
        assert!(gram.dist_frobenius(&ComplexMatrix::identity(3)) < 1e-13);
        for i in 0..3 {
            assert!(r.get(i, i).im.abs() < 1e-15);
            assert!(r.get(i, i).re > 0.0);
            for j in 0..i {
                assert_eq!(r.get(i, j), Complex64::ZERO);
            }
        }
    }

    #[test]
    fn qr_rejects_dependent_columns() {
        let a = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, 2.0)],
        )
        .unwrap();
        assert!(qr_mgs(&a).is_err());
    }

    #[test]
    fn completion_yields_unitary() {
        // isometry: single column (|0> + i|2>) / sqrt(2) in dim 3
        let s = 1.0 / 2f64.sqrt();
        let iso = ComplexMatrix::from_vec(3, 1, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, s)]).unwrap();
        let rest = orthonormal_completion(&iso).unwrap();
        assert_eq!(rest.cols(), 2);
        let mut full = ComplexMatrix::zeros(3, 3);
        full.set_block(0, 0, &iso);
        full.set_block(0, 1, &rest);
        let gram = full.dagger().matmul(&full);
        assert!(gram.dist_frobenius(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn completion_rejects_non_isometry() {
        let bad = ComplexMatrix::from_vec(2, 1, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(orthonormal_completion(&bad).is_err());
    }
}
