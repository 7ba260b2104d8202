use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid geometry/frequency: {0}")]
    InvalidGeometry(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("no intersection: {0}")]
    NoIntersection(String),

    #[error("invalid transmitter: {0}")]
    InvalidTransmitter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {field}: {constraint}")]
    Validation { field: String, constraint: String },

    #[error("no LoS reference; supply explicit reference")]
    NoLosReference,

    #[error("no crossing at f={0} Hz")]
    NoCrossing(f64),

    #[error("unknown experiment '{name}' (valid: {valid})")]
    UnknownExperiment { name: String, valid: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub fn validation(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            constraint: constraint.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
