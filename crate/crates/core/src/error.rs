use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{0}: result overflows f64")]
    Overflow(&'static str),

    /// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
    #[error(
        "quadrature did not reach tolerance after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error_estimate:e})"
    )]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("series did not converge within {terms} terms (partial sum {partial:e})")]
    Series { partial: f64, terms: usize },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("model mismatch: {0}")]
    Model(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn param(name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            detail: detail.into(),
        }
    }
}
