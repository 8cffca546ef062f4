use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("id out of range: node {id} with n = {n}")]
    IdOutOfRange { id: usize, n: usize },
    #[error("variance undefined below two rows (degree {degree} has {rows})")]
    TooFewRows { degree: usize, rows: usize },
    #[error("degree {0} is not held by at least two nodes")]
    DegreeNotInSupport(usize),
    #[error("normalisation singular: graph is complete (d = 1) or has no edges")]
    NormalisationSingular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-graphical or repair exhausted: {0}")]
    NonGraphical(String),
    #[error("pmf vanishes at quantile {0}")]
    PmfVanishes(f64),
    #[error("degenerate degree range: a = {a}, b = {b}")]
    DegenerateRange { a: i64, b: i64 },
    #[error("requested {requested} edges but only {available} non-edges remain")]
    NotEnoughNonEdges { requested: usize, available: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("constant input")]
    ConstantInput,
    #[error("degenerate design: predictor is constant")]
    DegenerateDesign,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io: {0}")]
    Io(String),
    #[error("serialisation: {0}")]
    Serde(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
