use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed graph6 input: {0}")]
    MalformedGraph6(String),
    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("eigenvalue cluster is ambiguous: gap {gap:e} is within 10x tolerance {tol:e}")]
    AmbiguousCluster { gap: f64, tol: f64 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation {0} is not a graph automorphism")]
    NotAnAutomorphism(usize),
    #[error("automorphism search exceeded node budget {budget}")]
    SearchBudgetExceeded { budget: usize },
    #[error("group closure exceeded cap {cap} ({partial} elements found)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("a complete group closure is required")]
    ClosureRequired,
    #[error("isotypic refinement did not stabilize: {0}")]
    UnstableSplit(String),
    #[error("component multiplicity is not one")]
    MultiplicityNotOne,
    #[error("some isotypic component has multiplicity greater than one")]
    MultiplicityObstruction,
    #[error("generator entries could not be rationalized")]
    RationalizationFailed,
    #[error("certificate residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("separating direction found (t = {t:e}) but no step size improves the eigenvalue")]
    LineSearchFailed { t: f64 },
    #[error("invalid group source: {0}")]
    InvalidGroupSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
