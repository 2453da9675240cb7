use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("transition matrix must be square: {rows} rows but row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },
    #[error("transition entry ({row},{col}) = {value} is not 0 or 1")]
    BadEntry { row: usize, col: usize, value: i64 },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("word {0:?} is not allowed in the trimmed subshift")]
    DisallowedWord(Vec<String>),
    #[error("potential depth must be at least 1")]
    BadDepth,
    #[error("subshift is empty after trimming")]
    EmptySubshift,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("graph has {vertices} vertices, brute force is limited to {limit}")]
    GraphTooLarge { vertices: usize, limit: usize },
    #[error("vertex {0} has no outgoing edge")]
    DeadVertex(usize),
    #[error("graph is not irreducible ({components} strongly connected components)")]
    Reducible { components: usize },
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { what: &'static str, iterations: usize, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("function is identically +inf")]
    Improper,
    #[error("undefined extended-real operation: +inf - +inf")]
    InfMinusInf,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
