use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the formula is defined.
    #[error("{name} = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// epsilon = 1 (xi = 0): zero binding, where 1/xi and 1/sqrt(1 - eps^2) diverge.
    #[error("nonrelativistic endpoint: {0} diverges at epsilon = 1")]
    NonrelativisticEndpoint(&'static str),

    /// A log-space exponent that cannot be exponentiated into an f64.
    #[error("{what} overflows: log-space exponent {exponent} exceeds the f64 range")]
    Overflow { what: &'static str, exponent: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid step {step}: {reason}")]
    InvalidStep { step: f64, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
