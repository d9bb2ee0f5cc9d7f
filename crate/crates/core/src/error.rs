use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A factor `z - k` of a negative-shift Pochhammer product vanished.
    #[error("pole in shifted factorial: ({z})_{{{shift}}} hits z - {k} = 0")]
    Pole { z: String, shift: i64, k: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tail bound unavailable: {0}")]
    BoundUnavailable(String),

    #[error("insufficient data: need at least {needed} partial sums, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("numeric breakdown: {0}")]
    NumericBreakdown(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The two independent pi formulas disagreed; this is an arithmetic bug.
    #[error("pi formulas agree on only {agreed} of {requested} digits")]
    AgreementFailure { agreed: usize, requested: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
