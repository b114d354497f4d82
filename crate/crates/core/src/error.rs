use thiserror::Error;

/// Errors raised by the numerical routines and the front ends built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{function}: argument {value} outside domain ({requirement})")]
    Domain {
        function: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A model or configuration parameter is invalid.
    #[error("{name} {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A Meijer-G instance whose (m, n, p, q) shape or parameter pattern is not supported.
    #[error("unsupported Meijer-G shape: {0}")]
    UnsupportedShape(String),

    /// A Meijer-G instance with a b-parameter above the large-shape guard.
    #[error("Meijer-G b-parameter {value} exceeds the large-shape guard {limit}")]
    LargeShape { value: f64, limit: f64 },

    /// A formula was requested outside the parameter regime it is valid for.
    #[error("{0}")]
    Regime(String),

    /// An iterative or adaptive method ran out of budget before meeting its target.
    #[error("{method} did not converge: {detail}")]
    NonConvergence { method: &'static str, detail: String },

    #[error("{function}: result overflows f64")]
    Overflow { function: &'static str },

    #[error("{function}: result underflows f64")]
    Underflow { function: &'static str },
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            requirement,
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by a numerical method failing rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Overflow { .. } | Error::Underflow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
