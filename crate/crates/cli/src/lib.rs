//! File formats, scenario data and the command implementations behind the
//! `enriques` binary.

pub mod commands;
pub mod expr;
pub mod format;
pub mod json;
pub mod scenarios;

use std::path::PathBuf;

pub use format::{parse_document, Document, Golden, ParseError, SequenceSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] enriques_core::Error),
    #[error("{0}")]
    Usage(String),
}
