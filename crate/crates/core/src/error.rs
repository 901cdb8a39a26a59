use thiserror::Error;

pub type Result<T> = std::result::Result<T, AllocError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocError {
    #[error("net withdrawal {withdrawal} exceeds invested total {invested}")]
    WithdrawalExceedsInvestment { withdrawal: f64, invested: f64 },

    #[error("{what} must be non-negative, got {value}")]
    NegativeAmount { what: &'static str, value: f64 },

    #[error("flow ratio undefined on network {network}: current total is 0 but pending flow is {tbd}")]
    UndefinedRatio { network: String, tbd: f64 },

    #[error("stretch denominator is zero while pending flows sum to {tbd_sum}")]
    DegenerateDenominator { tbd_sum: f64 },

    #[error("network share undefined: contributing totals sum to zero")]
    UndefinedShare,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("window ({start}, {end}] lies outside the series span [{span_start}, {span_end}]")]
    OutOfRange {
        start: f64,
        end: f64,
        span_start: f64,
        span_end: f64,
    },

    #[error("no usable history windows of length {horizon}")]
    InsufficientHistory { horizon: f64 },

    #[error("unknown network {0}")]
    UnknownNetwork(String),
}

impl AllocError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        AllocError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
