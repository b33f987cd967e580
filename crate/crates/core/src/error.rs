use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range 0..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("an h*-vector needs at least one entry")]
    EmptyVector,

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: String },

    #[error("the all-zero vector is not an h*-vector")]
    AllZero,

    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("vector of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("individual has no neighbors in the search space")]
    IsolatedIndividual,

    #[error("crossover found no valid offspring after {attempts} attempts")]
    CrossoverFailed { attempts: usize },

    #[error("dimension {dim} exceeds the counting oracle bound {max}")]
    OracleDimension { dim: usize, max: usize },

    #[error("point configuration is not full-dimensional")]
    Degenerate,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
