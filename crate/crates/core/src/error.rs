use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {degree} too large (field size must stay below {limit})")]
    DegreeTooLarge { degree: u32, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("GF({p}^{from}) is not a subfield of GF({p}^{to})")]
    NotAnExtension { p: u32, from: u32, to: u32 },
    #[error("no compatible root for the embedding GF({p}^{from}) -> GF({p}^{to})")]
    NoCompatibleRoot { p: u32, from: u32, to: u32 },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous (degrees {0} and {1})")]
    NotHomogeneous(u32, u32),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("bad field literal: {0}")]
    BadFieldLiteral(String),
    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("budget exceeded: {work} work units requested, budget is {budget}")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("point {0} is not on the variety")]
    PointNotOnVariety(String),
    #[error("point {0} is singular")]
    SingularPoint(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no affine coordinate is a local parameter at {0}")]
    NoTransverseCoordinate(String),
    #[error("truncation order {0} is too small")]
    TruncationTooSmall(usize),
    #[error("defining system is not locally a smooth curve at {0}")]
    InconsistentSystem(String),
    #[error("rank deficient matrix: {0}")]
    RankDeficient(String),

    #[error("curve is degenerate (contained in a plane)")]
    DegenerateCurve,
    #[error("no smooth point found within the sampling budget")]
    NoSmoothPointFound,
    #[error("every candidate Frobenius order pair gives a vanishing determinant")]
    AllCandidatesVanish,
    #[error("inconsistent order profile: {0}")]
    InconsistentProfile(String),
    #[error("only {0} points found over all budgeted extensions")]
    TooFewPoints(usize),

    #[error("surface irreducibility has not been asserted")]
    IrreducibilityNotAsserted,
    #[error("surface is Frobenius non-classical")]
    FrobeniusNonClassical,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("non-integer result: {0}")]
    NonIntegerResult(String),

    #[error("job file line {line}, column {col}: {msg}")]
    JobFile { line: usize, col: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

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

pub type Result<T> = std::result::Result<T, Error>;
