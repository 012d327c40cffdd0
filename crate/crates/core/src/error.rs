//! Error types shared across the crate.

use std::fmt;
use thiserror::Error;

/// A 1-based line/column pair pointing into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Errors raised while constructing terms.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("sort error: {0}")]
    Sort(String),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
}

/// Errors raised by the lexer, the problem parser, or the proof parser.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{pos}: lex error: {msg}")]
    Lex { pos: Position, msg: String },
    #[error("{pos}: parse error: {msg}")]
    Parse { pos: Position, msg: String },
    #[error("{pos}: sort error: {msg}")]
    Sort { pos: Position, msg: String },
    #[error("{pos}: undeclared symbol `{name}`")]
    UndeclaredSymbol { pos: Position, name: String },
    #[error("{pos}: unsupported command `{name}`")]
    UnsupportedCommand { pos: Position, name: String },
    #[error("{pos}: unknown premise `{id}`")]
    UnknownPremise { pos: Position, id: String },
    #[error("{pos}: anchor for step `{target}` is never closed")]
    UnclosedAnchor { pos: Position, target: String },
    #[error("{pos}: duplicate step id `{id}`")]
    DuplicateStepId { pos: Position, id: String },
}

impl FrontendError {
    pub fn position(&self) -> Position {
        match self {
            FrontendError::Lex { pos, .. }
            | FrontendError::Parse { pos, .. }
            | FrontendError::Sort { pos, .. }
            | FrontendError::UndeclaredSymbol { pos, .. }
            | FrontendError::UnsupportedCommand { pos, .. }
            | FrontendError::UnknownPremise { pos, .. }
            | FrontendError::UnclosedAnchor { pos, .. }
            | FrontendError::DuplicateStepId { pos, .. } => *pos,
        }
    }
}

/// Structural errors from the proof checker. Rule failures are not errors;
/// they are recorded per step in the report.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("goal step `{0}` does not exist in the proof")]
    UnknownGoal(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Errors from the pruner.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PruneError {
    #[error("no goal: no step concludes the empty clause and no goal was given")]
    NoGoal,
    #[error("goal step `{0}` does not exist in the proof")]
    UnknownGoal(String),
}
