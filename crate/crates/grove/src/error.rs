//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed PT-IR document at line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("token {index}: indexes must be contiguous from 0, expected {expected}")]
    TokenIndex { index: u32, expected: u32 },

    #[error("token {index} has empty text")]
    EmptyToken { index: u32 },

    #[error("node {node}: span {first}..{last} out of range for {tokens} tokens")]
    SpanOutOfRange {
        node: u32,
        first: u32,
        last: u32,
        tokens: u32,
    },

    #[error("node {child}: span escapes parent node {parent}")]
    ChildSpanEscapes { parent: u32, child: u32 },

    #[error("node {parent}: child {child} overlaps or precedes an earlier sibling")]
    SiblingOrder { parent: u32, child: u32 },

    #[error("node {node}: terminal nodes must have no children and span exactly one token")]
    InvalidTerminal { node: u32 },

    #[error("root node {root}: span must cover all {tokens} tokens")]
    RootSpan { root: u32, tokens: u32 },

    #[error("node {node}: {msg}")]
    TreeShape { node: u32, msg: String },

    #[error("unknown node id {0}")]
    UnknownNode(u32),

    #[error("grammar load failed: {0}")]
    Grammar(String),

    #[error("entry rule {rule:?} is not the start rule of this grammar (parses begin at {actual:?})")]
    EntryRule { rule: String, actual: String },

    #[error("{path}: syntax error at {line}:{column}")]
    Syntax { path: PathBuf, line: u32, column: u32 },

    #[error("{path}: file is not valid UTF-8")]
    Encoding { path: PathBuf },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no input files found")]
    NoInputs,

    #[error("all {0} input files failed to parse")]
    AllFilesFailed(usize),

    #[error("sample size {requested} exceeds population {population}")]
    SampleSize { requested: usize, population: usize },

    #[error("mutation of {path} did not produce a parsable file after {attempts} attempts")]
    MutationFailed { path: PathBuf, attempts: u32 },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
