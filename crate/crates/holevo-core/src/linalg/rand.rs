//! Seeded random models: Ginibre matrices, Haar-distributed unitaries, and
//! probability vectors.
//!
//! All sampling goes through [`LabRng`] (ChaCha12), whose independent
//! streams give every campaign trial its own reproducible generator that can
//! be replayed in isolation.

use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::ortho::qr_mgs;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// The crate-wide RNG. ChaCha12 is deterministic across platforms and
/// exposes 2⁶⁴ independent streams per seed.
pub type LabRng = ChaCha12Rng;

/// Generator for a master seed (stream 0).
pub fn seeded_rng(seed: u64) -> LabRng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Generator for one campaign trial: the master seed selects the key, the
/// trial index selects the stream, so trials are independent and any single
/// trial can be regenerated without replaying its predecessors.
pub fn trial_rng(seed: u64, trial: u64) -> LabRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Matrix with independent standard complex Gaussian entries
/// (real and imaginary parts each N(0, 1)).
pub fn random_ginibre(rows: usize, cols: usize, rng: &mut LabRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary, obtained as the Q factor of a Ginibre matrix.
/// Gram–Schmidt leaves R with a positive real diagonal, which is exactly the
/// normalization that makes Q Haar-distributed.
pub fn random_haar_unitary(dim: usize, rng: &mut LabRng) -> ComplexMatrix {
    loop {
        let g = random_ginibre(dim, dim, rng);
        // A Ginibre matrix is singular with probability zero; resample on
        // the measure-zero failure rather than propagate an error.
        if let Ok((q, _r)) = qr_mgs(&g) {
            return q;
        }
    }
}

/// Random point on the unit sphere in ℂ^dim (a pure state vector).
pub fn random_unit_vector(dim: usize, rng: &mut LabRng) -> Vec<Complex64> {
    loop {
        let g = random_ginibre(dim, 1, rng);
        let norm = g.frobenius_norm();
        if norm > 1e-6 {
            return g.column(0).into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Probability vector sampled as normalized squared Gaussians.
pub fn random_probabilities(n: usize, rng: &mut LabRng) -> Vec<f64> {
    loop {
        let mut weights: Vec<f64> = (0..n)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                x * x
            })
            .collect();
        let total: f64 = weights.iter().sum();
        if total > 1e-12 {
            for w in &mut weights {
                *w /= total;
            }
            return weights;
        }
    }
}

/// Probability vector whose entries are kept away from zero: each entry is
/// at least `floor / (1 + n·floor)`. Used where downstream factorizations
/// need full-rank spectra.
pub fn random_probabilities_floored(n: usize, floor: f64, rng: &mut LabRng) -> Vec<f64> {
    let raw = random_probabilities(n, rng);
    let total = 1.0 + n as f64 * floor;
    raw.into_iter().map(|p| (p + floor) / total).collect()
}
