use crate::ComplexValue;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive integration stopped before reaching the requested tolerance.
    /// `value` is the best estimate available at that point.
    #[error("tolerance not met: best value {value}, error estimate {err_est:e}")]
    ToleranceNotMet { value: ComplexValue, err_est: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
