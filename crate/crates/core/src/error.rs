use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bound: {0}")]
    InvalidBound(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// `|e(mα) - 1|` could not be certified above the configured floor.
    #[error("near resonance at m = {m}: ||m alpha|| = {norm:e} below floor {floor:e}")]
    NearResonance { m: i64, norm: f64, floor: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("index k = {k} is not resonant (q_(k+1) <= exp(tau q_k / 2) or q_k < b1)")]
    NonResonantIndex { k: usize },

    #[error("coefficient mass at m = {m} lies outside the resonant set")]
    SupportViolation { m: i64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("range exceeds sieve: need {needed}, table limit is {limit}")]
    OutOfRange { needed: u64, limit: u64 },

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
