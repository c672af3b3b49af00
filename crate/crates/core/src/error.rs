//! Error type shared by every module of the crate.

use alloc::string::String;

/// Errors raised by problem lookup, partitioning, selection and the solver loop.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// No registered problem (or no registered dimension) matches the request.
    #[error("unknown problem `{name}`")]
    UnknownProblem { name: String },

    /// The dimension is not supported by the named problem.
    #[error("problem `{name}` is not available in dimension {n}")]
    UnsupportedDimension { name: String, n: usize },

    /// No catalog algorithm carries the requested id.
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    /// A point handed to an evaluator lies outside the problem bounds.
    #[error("point outside the domain at coordinate {index}: {value} not in [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// A vector of the wrong length was supplied.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Bounds are not finite or not strictly increasing.
    #[error("invalid bounds at coordinate {index}: [{lower}, {upper}]")]
    InvalidBounds {
        index: usize,
        lower: f64,
        upper: f64,
    },

    /// The linear feasible region is empty.
    #[error("the linearly constrained region is empty")]
    EmptyFeasibleRegion,

    /// The linear feasible region has no interior.
    #[error("the linearly constrained region is degenerate (affine dimension {dim} < {n})")]
    DegenerateFeasibleRegion { dim: usize, n: usize },

    /// A size cap on an enumeration was exceeded.
    #[error("{what}: {value} exceeds the supported maximum of {max}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        max: usize,
    },

    /// The algorithm cannot be applied to this class of problem.
    #[error("algorithm `{algorithm}` cannot solve {class} problem `{problem}`")]
    IncompatibleClass {
        algorithm: String,
        problem: String,
        class: &'static str,
    },

    /// A malformed numerical argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A malformed problem descriptor.
    #[error("descriptor line {line}: {message}")]
    Descriptor { line: usize, message: String },

    /// A parallel worker aborted.
    #[error("worker {worker} failed: {message}")]
    Worker { worker: usize, message: String },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
