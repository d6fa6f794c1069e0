//! Circuit serialization: the line-based text format and Quirk URLs.

use thiserror::Error;

use crate::circuit::Violation;

pub mod quirk;
pub mod text;

pub use quirk::{export_quirk_url, parse_quirk_url};
pub use text::{emit_text, parse_text};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("invalid circuit: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidCircuit(Vec<Violation>),
    #[error("op {op} cannot be expressed in Quirk: {reason}")]
    Unrepresentable { op: usize, reason: String },
    #[error("malformed Quirk URL: {0}")]
    MalformedUrl(String),
    #[error("malformed Quirk JSON: {0}")]
    MalformedJson(String),
    #[error("unsupported Quirk gate `{0}`")]
    UnsupportedGate(String),
    #[error("column {column}: unsupported construct: {reason}")]
    UnsupportedConstruct { column: usize, reason: String },
}
