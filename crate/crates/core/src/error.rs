use thiserror::Error;

use crate::ingest::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid time reference `{0}`")]
    InvalidTime(String),

    #[error("time reference `{valid_at}` cannot be resolved against `{now}`")]
    UnresolvableTime { valid_at: String, now: String },

    #[error("invalid location: {0}")]
    InvalidLocation(String),

    #[error("invalid method id `{0}`")]
    InvalidMethod(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("knowledge base error at {path}: {message}")]
    KnowledgeBase { path: String, message: String },

    #[error("source map rejected ({} diagnostics)", .0.len())]
    SourceMap(Vec<Diagnostic>),

    #[error("opaque atom `{0}`")]
    OpaqueAtom(String),

    #[error("theory error: {0}")]
    Theory(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("supremacy strategy `{strategy}` broke its contract: {message}")]
    Strategy { strategy: String, message: String },

    #[error("oracle size bound exceeded: {0} atoms (max {1})")]
    OracleBound(usize, usize),

    #[error("incoherent scenario: {0}")]
    IncoherentScenario(String),

    #[error("lexicon error: {0}")]
    Lexicon(String),

    #[error("template error: {0}")]
    Template(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
