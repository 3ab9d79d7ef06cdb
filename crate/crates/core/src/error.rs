use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// σ = ρ − 1/6 is outside the admissible window (1/120, 1/102].
    #[error("sigma = {sigma} is outside (1/120, 1/102]")]
    OutOfRange { sigma: String },

    /// A caller supplied input that violates an operation's hypotheses.
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error(
        "{id}: quadrature did not reach the requested tolerance \
         (value {value:.9e}, error estimate {error:.3e}, {evaluations} evaluations)"
    )]
    NoConvergence { id: String, value: f64, error: f64, evaluations: u64 },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("enumeration budget exceeded: {needed} operations requested, cap is {cap}")]
    Budget { needed: u64, cap: u64 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str) -> Self {
        Error::Parse { what, input: input.to_owned() }
    }
}
