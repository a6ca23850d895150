use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no applicable swap: the ensemble has a single state")]
    Frozen,
    #[error("no frequent itemsets at (f={f}, l={l})")]
    NoItemsets { f: usize, l: usize },
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("unknown category '{0}'")]
    UnknownCategory(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
