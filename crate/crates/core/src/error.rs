use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no connected sample after {attempts} attempts (edge probability too small?)")]
    SamplingFailure { attempts: usize },

    #[error("vertex {0} has degree zero")]
    DegreeZero(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("function is degenerate (zero weighted norm after centering)")]
    DegenerateFunction,

    #[error("function is not harmonic: {0}")]
    NotHarmonic(String),

    #[error("{what} = {value} exceeds the limit {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
}

impl Error {
    /// True for failures of the numerical routines rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
