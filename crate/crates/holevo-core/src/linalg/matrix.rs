//! Dense complex matrices in row-major storage.
//!
//! Dimensions in this crate stay small (products of qudit dimensions,
//! typically below 100), so the implementation favours clarity and
//! predictable numerics over blocked kernels.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Dense matrix over ℂ with entries stored row-major: `data[r * cols + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be non-empty");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of size `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Build from a row-major entry vector. Length must equal `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "expected {rows}x{cols} = {} entries, got {}",
                    rows * cols,
                    data.len()
                ),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Build entry-by-entry from a closure `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Real diagonal matrix with the given entries.
    pub fn diag_re(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Outer product `v w†` of two column vectors.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        ComplexMatrix::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entry slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = value;
    }

    /// True when every entry is finite (no NaN or infinities).
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// Entrywise sum. Panics on shape mismatch (internal precondition).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise difference. Panics on shape mismatch (internal precondition).
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|z| z * factor).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Real scalar multiple.
    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product. Panics on inner-dimension mismatch (internal precondition).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace: matrix must be square");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm `sqrt(Σ |a_ij|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn dist_frobenius(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// Relative Hermiticity defect `‖M − M†‖_F / max(‖M‖_F, 1)`.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square(), "hermiticity_defect: matrix must be square");
        self.dist_frobenius(&self.dagger()) / self.frobenius_norm().max(1.0)
    }

    /// Error unless the matrix is square and Hermitian within `tol` (relative).
    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: format!("{}x{} matrix cannot be Hermitian", self.rows, self.cols),
            });
        }
        let residual = self.hermiticity_defect();
        if residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        Ok(())
    }

    /// Symmetrized copy `(M + M†)/2`, removing round-off asymmetry.
    pub fn hermitize(&self) -> Self {
        self.add(&self.dagger()).scale_re(0.5)
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Copy `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "set_block: block exceeds target shape"
        );
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// Extract the `nrows x ncols` block with top-left corner at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        assert!(
            r0 + nrows <= self.rows && c0 + ncols <= self.cols,
            "block: region exceeds matrix shape"
        );
        ComplexMatrix::from_fn(nrows, ncols, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }
}

/// Kronecker product. Row index of the result is `i_left * rows(b) + i_right`,
/// so the left factor is the slow (major) index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ra in 0..a.rows() {
        for ca in 0..a.cols() {
            let f = a.get(ra, ca);
            if f == Complex64::ZERO {
                continue;
            }
            for rb in 0..b.rows() {
                for cb in 0..b.cols() {
                    out.set(ra * b.rows() + rb, ca * b.cols() + cb, f * b.get(rb, cb));
                }
            }
        }
    }
    out
}

/// Inner product `⟨v, w⟩ = Σ v̄_i w_i`, conjugate-linear in the first slot.
pub fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    assert_eq!(v.len(), w.len(), "inner: length mismatch");
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let a = ComplexMatrix::from_fn(3, 3, |r, cc| c((r * 3 + cc) as f64, (r + cc) as f64));
        let id = ComplexMatrix::identity(3);
        assert_eq!(a.matmul(&id), a);
        assert_eq!(id.matmul(&a), a);
    }

    #[test]
    fn dagger_conjugates_and_transposes() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 2.0), c(3.0, -1.0), c(0.0, 4.0), c(5.0, 0.0)]).unwrap();
        let d = a.dagger();
        assert_eq!(d.get(0, 1), c(0.0, -4.0));
        assert_eq!(d.get(1, 0), c(3.0, 1.0));
        assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn matmul_known_product() {
        // [[1, i], [0, 2]] * [[1, 0], [1, 1]] = [[1+i, i], [2, 2]]
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = a.matmul(&b);
        assert_eq!(p.get(0, 0), c(1.0, 1.0));
        assert_eq!(p.get(0, 1), c(0.0, 1.0));
        assert_eq!(p.get(1, 0), c(2.0, 0.0));
        assert_eq!(p.get(1, 1), c(2.0, 0.0));
    }

    #[test]
    fn trace_and_frobenius() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)]).unwrap();
        assert_eq!(a.trace(), c(3.0, 0.0));
        let f = a.frobenius_norm();
        assert!((f - (1.0f64 + 1.0 + 4.0 + 1.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_indexing_is_left_major() {
        // (A ⊗ B)[(ra,rb),(ca,cb)] = A[ra,ca] B[rb,cb]
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let k = kron(&a, &b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(0, 0), c(0.0, 1.0)); // A[0,0] B[0,0]
        assert_eq!(k.get(2 * 1 + 1, 2 * 0 + 1), c(3.0, 0.0)); // A[1,0] B[1,1]
    }

    #[test]
    fn hermitize_produces_hermitian() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.5), c(2.0, 1.0), c(0.0, 0.0), c(3.0, -0.5)]).unwrap();
        let h = a.hermitize();
        assert!(h.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn require_hermitian_rejects_skew() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(a.require_hermitian(1e-10).is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let mut m = ComplexMatrix::zeros(4, 4);
        let b = ComplexMatrix::from_fn(2, 2, |r, cc| c((r + 1) as f64, cc as f64));
        m.set_block(1, 2, &b);
        assert_eq!(m.block(1, 2, 2, 2), b);
        assert_eq!(m.get(0, 0), Complex64::ZERO);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let v = vec![c(0.0, 1.0), c(1.0, 0.0)];
        let w = vec![c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(inner(&v, &w), c(0.0, -1.0));
        assert!((vec_norm(&v) - 2f64.sqrt()).abs() < 1e-15);
    }
}
