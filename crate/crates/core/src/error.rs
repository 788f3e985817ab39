use thiserror::Error;

use crate::optimizer::RunTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The oracle refused a draw. `wasted` counts the draws already spent
    /// by the estimator call that was aborted.
    #[error("sample budget exhausted (limit {limit}, {wasted} draws discarded)")]
    BudgetExhausted { limit: u64, wasted: u64 },

    #[error("iterate diverged at iteration {iteration}")]
    Diverged {
        iteration: usize,
        trace: Box<RunTrace>,
    },

    #[error("unsupported environment: {0}")]
    UnsupportedEnvironment(String),

    #[error("variance ratio undefined: input has zero variance")]
    UndefinedRatio,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate classifier: decision boundary unreachable with zero weights")]
    DegenerateClassifier,

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
