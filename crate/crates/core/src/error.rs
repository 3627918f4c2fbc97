use thiserror::Error;

use crate::algebra::AlgebraKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the valuation algebra, network construction, fusion and
/// the model-file front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra mismatch: cannot mix {0} and {1} valuations")]
    AlgebraMismatch(AlgebraKind, AlgebraKind),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{op} is not supported for {kind} valuations")]
    Unsupported { op: &'static str, kind: AlgebraKind },

    #[error("inconsistent removal: nonzero entry {value} divided by zero")]
    InconsistentRemoval { value: String },

    #[error("cannot normalize a zero valuation")]
    CannotNormalize,

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("invalid name {0:?}")]
    InvalidName(String),

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("duplicate variable {0}")]
    DuplicateVariable(String),

    #[error("duplicate node {0}")]
    DuplicateNode(String),

    #[error("variable {var} is in the head of both {first} and {second}")]
    HeadConflict {
        var: String,
        first: String,
        second: String,
    },

    #[error("conditional structure is cyclic through {0}")]
    ConditionalCycle(String),

    #[error("node {0} has no table")]
    StructureOnly(String),

    #[error("conditional {node} is not normalized over its head (deviation {deviation:e})")]
    NotNormalized { node: String, deviation: f64 },

    #[error("sets overlap: {0}")]
    Overlap(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("table for {node} has {found} entries, expected {expected}")]
    TableLength {
        node: String,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// True for errors caused by malformed input text or arguments rather
    /// than by a well-formed but invalid model.
    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Usage(_))
    }
}
