//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the solvers and their supporting kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// Input file or matrix text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Constraint matrix is column-rank deficient.
    #[error("rank error: {0}")]
    Rank(String),

    /// Matrix shape violates `n >= d >= 1`.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Row index outside `[0, n)`.
    #[error("index error: row {row} out of range for {rows} rows")]
    Index { row: usize, rows: usize },

    /// Neighbor perturbation larger than the declared closeness.
    #[error("closeness error: |delta| = {norm} exceeds eps0 = {eps0}")]
    Closeness { norm: f64, eps0: f64 },

    /// A Gram matrix or quadratic form degenerated.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// An analytic precondition does not hold for the given inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Parameter outside the domain of a distribution or bound.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive integration failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// Privacy budget outside the admissible range of the calibration rule.
    #[error("privacy budget error: {0}")]
    Budget(String),

    /// Calibration verified-delta round trip failed at every moment order.
    #[error("infeasible privacy target: {0}")]
    Infeasible(String),

    /// Diagnostic trace missing or inconsistent with the run.
    #[error("trace error: {0}")]
    Trace(String),

    /// A containment audit found an offending row or sample point.
    #[error("containment violation: {0}")]
    Containment(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
