use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("word is not in admissible block form (fails at position {position})")]
    NotAdmissible { position: usize },

    #[error("word {0} is exceptional; the cascade map is undefined on it")]
    ExceptionalWord(String),

    #[error("no matching or periodicity detected within {max_iter} iterations")]
    NotFound { max_iter: usize },

    #[error("parameter {0} is neither matching nor a detected Markov parameter")]
    NonMatchingExact(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::NotAdmissible { .. } => "not_admissible",
            Error::ExceptionalWord(_) => "exceptional_word",
            Error::NotFound { .. } => "not_found",
            Error::NonMatchingExact(_) => "non_matching_exact",
            Error::Construction(_) => "construction",
            Error::Numeric(_) => "numeric",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
