use thiserror::Error;

/// Errors produced while building or evaluating means.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeanError {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid mean expression: {0}")]
    InvalidExpr(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("overflow while evaluating generator `{generator}` at {at}")]
    Overflow { generator: String, at: f64 },

    /// An iterative solver stopped without meeting its tolerance.
    #[error("{solver} did not converge after {iterations} iterations (final gap {gap:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        gap: f64,
    },

    /// A root bracket did not change sign; the monotonicity contract of a
    /// generator or deviation was broken.
    #[error("{solver}: no sign change over [{lo}, {hi}]")]
    NoSignChange {
        solver: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("{what} = {value} outside supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: &'static str,
    },

    #[error("optimizer budget exhausted without a feasible evaluation")]
    BudgetExhausted,
}

impl MeanError {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            MeanError::InvalidSample(_) => "E_INVALID_SAMPLE",
            MeanError::InvalidExpr(_) => "E_INVALID_EXPR",
            MeanError::InvalidConfig(_) => "E_INVALID_CONFIG",
            MeanError::Overflow { .. } => "E_OVERFLOW",
            MeanError::NonConvergence { .. } => "E_NON_CONVERGENCE",
            MeanError::NoSignChange { .. } => "E_NO_SIGN_CHANGE",
            MeanError::OutOfRange { .. } => "E_OUT_OF_RANGE",
            MeanError::BudgetExhausted => "E_BUDGET_EXHAUSTED",
        }
    }
}

pub type Result<T> = std::result::Result<T, MeanError>;
