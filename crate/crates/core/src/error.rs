use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not nilpotent: entry ({row},{col}) on or below the diagonal is nonzero")]
    NotNilpotent { row: usize, col: usize },

    #[error("not unipotent: entry ({row},{col}) of U - I is on or below the diagonal and nonzero")]
    NotUnipotent { row: usize, col: usize },

    /// A coefficient of negative ε-degree survived, so the n → ∞ limit diverges.
    #[error("limit does not exist: entry ({row},{col}) has coefficient {coefficient} at degree {degree}")]
    LimitDoesNotExist {
        degree: i32,
        row: usize,
        col: usize,
        coefficient: String,
    },

    #[error("Laurent degree {degree} outside configured bound ±{bound} for dimension {dim}")]
    DegreeOverflow { degree: i32, bound: i32, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tangent undefined: {0}")]
    TangentUndefined(String),

    #[error("flow blow-up at x = {x}: {reason}")]
    FlowBlowUp { x: f64, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid fixture: {0}")]
    InvalidFixture(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}
