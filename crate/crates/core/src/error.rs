use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Zero spread (or otherwise unusable) sample for a density estimate.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A denominator vanished; the payload names it.
    #[error("singularity: {0} is zero")]
    Singularity(String),

    #[error("degenerate optimum: AB - C^2 = {0} is not positive")]
    DegenerateOptimum(f64),

    #[error("unknown estimator `{name}`; valid names: {valid}")]
    UnknownEstimator { name: String, valid: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
