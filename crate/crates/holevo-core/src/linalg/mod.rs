//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! SVD/polar decomposition, orthonormalization, and seeded random models.

pub mod eig;
pub mod matrix;
pub mod ortho;
pub mod rand;
pub mod svd;

pub use eig::{hermitian_eig, matrix_sqrt, min_eigenvalue, support_projection, HermitianEig, PsdSpectral};
pub use matrix::{inner, kron, vec_norm, ComplexMatrix};
pub use ortho::{orthonormal_completion, qr_mgs};
pub use rand::{
    random_ginibre, random_haar_unitary, random_probabilities, random_probabilities_floored,
    random_unit_vector, seeded_rng, trial_rng, LabRng,
};
pub use svd::{operator_norm, polar_left, svd, trace_norm, PolarFactors, Svd};
