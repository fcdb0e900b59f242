//! Error type shared by every module in the crate.
//!
//! Numerical rejections carry the measured residual so callers can tell a
//! hard failure from a tolerance that was merely a little too tight.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix failed the Hermiticity check `‖H − H†‖_F ≤ tol·‖H‖_F`.
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    /// Matrix has an eigenvalue below the allowed negative floor.
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    /// Jacobi iteration exhausted its sweep budget before the off-diagonal
    /// mass dropped under the convergence threshold.
    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_diag:.3e})")]
    NoConvergence { sweeps: usize, off_diag: f64 },

    /// Candidate state failed a density-matrix axiom (trace, Hermiticity, PSD).
    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    /// A bipartite operation was requested on a state with no registered split.
    #[error("density matrix carries no bipartite split")]
    NoBipartiteSplit,

    /// Operand shapes are incompatible for the requested operation.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Supplied vectors were expected to be orthonormal and are not.
    #[error("vectors are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    /// Index sets fail to partition the basis range.
    #[error("index sets do not partition the basis: {reason}")]
    NotPartition { reason: String },

    /// Gram–Schmidt could not extend a given isometry to a full unitary.
    #[error("orthonormal completion failed: {reason}")]
    CompletionFailure { reason: String },

    /// Operator failed the unitarity check `‖U†U − 1‖_F ≤ tol`.
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    /// State was required to be pure and is not.
    #[error("state is not pure (purity defect {defect:.3e})")]
    NotPure { defect: f64 },

    /// Requested rank is zero or exceeds the matrix dimension.
    #[error("invalid rank {rank} for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    /// A factorization's side condition does not hold, so the downstream
    /// claim is not applicable to this input.
    #[error("side condition violated (residual {residual:.3e} exceeds {tol:.3e})")]
    ConditionViolated { residual: f64, tol: f64 },

    /// Witness factors failed to reproduce the operator they were solved from.
    #[error("witness reconstruction failed: {context} (residual {residual:.3e})")]
    ReconstructionFailure { context: String, residual: f64 },

    /// Probability vector is not normalized or contains negative weights.
    #[error("invalid probability vector: {reason}")]
    BadProbabilities { reason: String },

    /// Command-line or tolerance-override configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Input file could not be decoded into the expected shape.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code this error maps to at the CLI boundary: configuration and
    /// decoding problems exit 2, everything else is a property violation (1).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
