use thiserror::Error;

/// Errors produced by construction, validation, and computation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands live on spaces of different dimension, or a matrix has the
    /// wrong shape for the space it is applied to.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A structural invariant failed at construction time.
    #[error(
        "invariant violation in {check}: residual {residual:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    InvariantViolation {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },

    /// The quadratic form of the flow is not definite, or -A^2 has
    /// non-positive spectrum: no positive-energy complex structure exists.
    #[error("no positive-energy structure: {reason}")]
    NoPositiveEnergyStructure { reason: String },

    /// Neither sign choice satisfied the positivity axiom. Given valid
    /// preconditions this should be impossible; surfaced as a diagnostic.
    #[error(
        "positivity axiom failed for both sign choices (min eigenvalues {plus:.3e} / {minus:.3e})"
    )]
    PositivitySignUnresolved { plus: f64, minus: f64 },

    /// An iterative computation failed to reach its tolerance within the
    /// permitted cutoff budget.
    #[error("convergence failure: {what} (reached {achieved:.3e}, wanted {wanted:.3e})")]
    ConvergenceFailure {
        what: &'static str,
        achieved: f64,
        wanted: f64,
    },

    /// A supplied spanning set was linearly dependent under the relevant
    /// inner product.
    #[error("dependent spanning set: vector {index} has projection residual {residual:.3e}")]
    DependentSpanningSet { index: usize, residual: f64 },

    /// A size cap protecting dense-matrix memory was exceeded.
    #[error("size limit exceeded: {what} = {got}, cap {cap}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    /// Invalid argument outside any structural invariant.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two computation routes that must agree disagreed beyond tolerance.
    #[error("internal cross-check failed in {check}: discrepancy {discrepancy:.3e} exceeds {tolerance:.3e}")]
    CrossCheckFailed {
        check: &'static str,
        discrepancy: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
