use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("graph integrity: {0}")]
    Integrity(String),

    #[error("invalid query: {0}")]
    Query(String),

    #[error("oracle budget of {budget} expansions exhausted")]
    OracleBudget { budget: u64 },

    #[error("count overflow while enumerating matches")]
    CountOverflow,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("disjunction expansion yields {count} queries, cap is {cap}")]
    ExpansionCap { count: usize, cap: usize },

    #[error("max-entropy solver did not converge (residual {residual:e} after {iterations} sweeps)")]
    Convergence { residual: f64, iterations: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
