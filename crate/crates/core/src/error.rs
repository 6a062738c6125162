use thiserror::Error;

/// Every failure the library can signal.
///
/// The CLI maps each variant onto a process exit code through
/// [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("norm of zero is not defined at the arithmetic layer")]
    NormOfZero,

    #[error("{0} is not a prime (trial division up to 10^6)")]
    NotPrime(u64),

    #[error("insufficient p-adic precision: need {needed} digits, have {available}")]
    InsufficientPAdicPrecision { needed: i64, available: i64 },

    #[error("real precision exhausted: {0}")]
    PrecisionLoss(String),

    #[error("value is not irrational: {0} is a perfect square")]
    NotIrrational(String),

    #[error("real overflow: |t| must stay below {max_t}")]
    RealOverflow { max_t: f64 },

    #[error("horizon {0} exceeds the supported integer width")]
    HorizonOverflow(u64),

    #[error("search budget exhausted before certification: {0}")]
    BudgetExhausted(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// 2 usage, 3 precision, 4 budget exhausted, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidInput(_) | Error::NotPrime(_) => 2,
            Error::NotIrrational(_) | Error::HorizonOverflow(_) => 2,
            Error::InsufficientPAdicPrecision { .. }
            | Error::PrecisionLoss(_)
            | Error::RealOverflow { .. } => 3,
            Error::BudgetExhausted(_) => 4,
            Error::NormOfZero | Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
