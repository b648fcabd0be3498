use thiserror::Error;

/// Errors raised while reading or validating an instance.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate node id {id}")]
    DuplicateNode { line: usize, id: usize },
    #[error("line {line}: negative value {value}")]
    Negative { line: usize, value: String },
    #[error("line {line}: not a tree ({msg})")]
    NotATree { line: usize, msg: String },
    #[error("values too large: n * max value = {product} exceeds {limit}")]
    Overflow { product: u128, limit: u128 },
    #[error("structured input: {0}")]
    Structured(String),
}

/// Errors from solver entry points.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("instance has {n} nodes, oracle cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("competitor set X is empty")]
    EmptyCompetitorSet,
    #[error("direct covering requires positive edge costs; edge {a}-{b} has cost 0")]
    ZeroCostEdge { a: usize, b: usize },
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
