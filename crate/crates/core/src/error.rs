use thiserror::Error;

/// Everything that can go wrong while building, counting or analysing a loose graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: loop at vertex `{vertex}` (edges need two distinct endpoints)")]
    Loop { line: usize, vertex: String },

    #[error("line {line}: duplicate edge {a}-{b}")]
    DuplicateEdge { line: usize, a: String, b: String },

    #[error("line {line}: duplicate vertex `{vertex}`")]
    DuplicateVertex { line: usize, vertex: String },

    #[error("line {line}: undeclared vertex `{vertex}`")]
    UndeclaredVertex { line: usize, vertex: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("edge {0}-{1} is not a full edge of the graph")]
    EdgeNotPresent(String, String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not a loose tree: {0}")]
    NotATree(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point has {got} coordinates, model has {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("ambient space has {0} coordinates; at most {max} are supported", max = crate::ambient::MAX_COORDS)]
    TooManyCoordinates(usize),

    #[error("enumeration budget exceeded: {what} needs {required}, budget is {budget}")]
    BudgetExceeded { what: String, required: u128, budget: u128 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("duplicate sample abscissa {0}")]
    DuplicateSample(i128),

    #[error("interpolated coefficient of L^{exponent} is not an integer ({value})")]
    NonIntegral { exponent: usize, value: String },

    #[error(
        "sample at q = {q} disagrees with the interpolated polynomial (count {count}, polynomial gives {predicted})"
    )]
    Inconsistent { q: i128, count: i128, predicted: i128 },

    #[error("arithmetic overflow while {0}")]
    Overflow(String),
}

impl Error {
    /// Errors that indicate a disagreement between two computation routes,
    /// as opposed to bad input or a resource limit.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(self, Error::NonIntegral { .. } | Error::Inconsistent { .. } | Error::Overflow(_))
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::TooManyCoordinates(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
