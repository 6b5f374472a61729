//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension {0} must be an odd prime for this operation")]
    OddPrimeRequired(u64),

    #[error("{x} has no inverse modulo {d} (x ≡ 0)")]
    NoInverse { x: i64, d: u64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M†| entry = {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:.3e})"
    )]
    EigenNoConvergence { sweeps: usize, off: f64 },

    #[error("sequence {0:?} is not a permutation of 0..{1}")]
    NotPermutation(Vec<usize>, usize),

    #[error("excluded basis index {index} out of range 0..={max}")]
    ExcludedOutOfRange { index: usize, max: usize },

    #[error("expected {expected} relabellings, got {got}")]
    RelabellingCount { expected: usize, got: usize },

    #[error("probe is not a density operator: {reason}")]
    NotDensity { reason: String },

    #[error("invalid POVM: {reason}")]
    NotPovm { reason: String },

    #[error("operator {index} is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { index: usize, min_eig: f64 },

    #[error(
        "strategy is construction-specific: expected the shifted (dpp) basis family, got {got}"
    )]
    StrategyConstructionSpecific { got: String },

    #[error("{what} requires {required} evaluations, over the budget of {budget}; use the see-saw lower bound instead")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("measurement solver stalled after {iterations} iterations (certificate gap {gap:.3e}); best value {value:.12}")]
    SolverStalled {
        iterations: usize,
        gap: f64,
        value: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("serialization: {0}")]
    Serialization(String),
}
