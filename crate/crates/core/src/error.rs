use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the crate.
///
/// Variants fall into three families that the `scanex` binary maps to exit
/// codes: input that cannot be read or parsed, input that parses but breaks a
/// model rule, and violated internal invariants.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("negative or non-finite weight {value} at {what}")]
    NegativeWeight { what: String, value: String },
    #[error("index {index} out of range for side {side} ({len} vertices)")]
    IndexOutOfRange { side: u8, index: usize, len: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("invalid side {0}; expected 1 or 2")]
    InvalidSide(u8),
    #[error("side {0} has no vertices")]
    EmptySide(u8),
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("score {score} for ({u}, {v}) is outside [0, 1]")]
    ScoreOutOfRange { u: usize, v: usize, score: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("policy labels do not match the graph's vertex set: {0}")]
    LabelDomainMismatch(String),
    #[error("policy leaves edge {u} - {v} uncovered")]
    InadmissiblePolicy { u: VertexId, v: VertexId },
    #[error("effective weights are not uniform")]
    NonUniformWeights,
    #[error("ground-truth closure {u} - {v} is not a candidate edge")]
    GroundTruthOutsideCandidates { u: VertexId, v: VertexId },
    #[error("graph too large for exhaustive search ({0} vertices)")]
    TooLargeForExhaustive(usize),
    #[error("scaled integer weights overflow the flow solver's capacity type")]
    WeightOverflow,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::Parse(_) => ErrorClass::Parse,
            Error::Invariant(_) => ErrorClass::Internal,
            _ => ErrorClass::Validation,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

/// Reads a whole text file, tagging failures with the path.
pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<String> {
    std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
}
