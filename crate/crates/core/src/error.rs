use thiserror::Error;

use crate::sexpr::Pos;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("sort error at `{symbol}`: {msg}")]
    Sort { symbol: String, msg: String },

    #[error("unmapped symbol `{0}`")]
    Unmapped(String),

    #[error("coverage error, unmapped symbols: {}", .0.join(", "))]
    Coverage(Vec<String>),

    #[error("rewriting ran out of fuel after {0} steps")]
    FuelExhausted(usize),

    #[error("rule mismatch at {node}: expected {expected}, found {actual}")]
    RuleMismatch { node: String, expected: String, actual: String },

    #[error("scope error: {0}")]
    Scope(String),

    #[error("eigenvariable violation: {0}")]
    Eigenvariable(String),

    #[error("cannot infer a formula for {0}")]
    CannotInfer(String),

    #[error("malformed encoding at {subtree}: {msg}")]
    MalformedEncoding { subtree: String, msg: String },

    #[error("ill-formed primitive recursive definition `{name}`: {msg}")]
    IllFormedDef { name: String, msg: String },

    #[error("statement kind `{kind}` does not accept {subject}")]
    KindMismatch { kind: String, subject: String },

    #[error("unregistered symbol `{0}`")]
    Unregistered(String),
}

impl Error {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    pub fn sort(symbol: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Sort { symbol: symbol.into(), msg: msg.into() }
    }

    pub fn ill_formed(name: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::IllFormedDef { name: name.into(), msg: msg.into() }
    }
}
