use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("malformed data: {0}")]
    Shape(String),
    #[error("invalid {what}: {}", join_violations(.violations))]
    Invalid {
        what: &'static str,
        violations: Vec<Violation>,
    },
    #[error("outcome {0:?} is not covered by the partition")]
    MissingOutcome(String),
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("outcome {outcome:?} has probability {probability:e}, no post-measurement state")]
    ZeroProbability { outcome: String, probability: f64 },
    #[error("effect {index} is not a projector (residual {residual:e})")]
    NotProjector { index: usize, residual: f64 },
    #[error("effects {first} and {second} are not orthogonal (residual {residual:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        residual: f64,
    },
    #[error("not a refinement of outcome {outcome:?} (residual {residual:e})")]
    NotARefinement { outcome: String, residual: f64 },
    #[error("operation requires a quantum system")]
    NotQuantum,
    #[error("hierarchy level must be at least 1")]
    InvalidLevel,
    #[error("graph with {vertices} vertices exceeds the limit of {limit}")]
    SizeLimit { vertices: usize, limit: usize },
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("unknown built-in {0:?}")]
    UnknownBuiltin(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear program is unbounded")]
    Unbounded,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// True for errors caused by a configured resource limit.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}
