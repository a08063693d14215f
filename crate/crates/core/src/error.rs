use thiserror::Error;

/// Errors raised by the numeric layers and the proof pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    /// A rigorous decision could not be reached at the available precision.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Bisection did not find a certified sign change.
    #[error("no certified sign change: {0}")]
    NoSignChange(String),

    /// A certificate condition failed; `index` names the failing derivative order when relevant.
    #[error("certification failed{}: {reason}", index.map(|j| format!(" at derivative order {j}")).unwrap_or_default())]
    Certification { index: Option<usize>, reason: String },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
