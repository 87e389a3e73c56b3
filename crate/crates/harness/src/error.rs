use std::path::PathBuf;

use graphcanon::{AlgoError, GraphError};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("invalid p-expression {expr:?}: {msg}")]
    Expr { expr: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algo(#[from] AlgoError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 for bad input, 3 when a size cap is exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Algo(AlgoError::CapExceeded { .. })
            | HarnessError::Algo(AlgoError::BudgetExceeded { .. }) => 3,
            HarnessError::Algo(AlgoError::NotApplicable(_)) => 1,
            _ => 2,
        }
    }
}
