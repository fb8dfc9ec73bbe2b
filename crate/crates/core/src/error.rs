use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{list} dates are not strictly increasing at index {index} ({prev} then {next})")]
    UnsortedDates {
        list: &'static str,
        index: usize,
        prev: f64,
        next: f64,
    },
    #[error("{list} date {date} must be strictly positive")]
    NonPositiveDate { list: &'static str, date: f64 },
    #[error("maturity {0} must be strictly positive")]
    InvalidMaturity(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid is invalid: {0}")]
    InvalidGrid(String),
    #[error("two-point jump size {m} is not an integer multiple of the grid spacing {dx}")]
    MisalignedJump { m: f64, dx: f64 },
    #[error("squared volatility is negative at t={t}, x={x} ({value})")]
    InadmissibleVolatility { t: f64, x: f64, value: f64 },
    #[error("Riccati solution blew up on [{lo}, {hi}) (|b| > 1e8)")]
    RiccatiBlowUp { lo: f64, hi: f64 },
    #[error("{engine} does not support {what}")]
    Unsupported {
        engine: &'static str,
        what: String,
    },
    #[error("time {t} is after maturity {maturity}")]
    TimeAfterMaturity { t: f64, maturity: f64 },
    #[error("localization failed to bracket the domain within {limit} rate units")]
    BracketFailure { limit: f64 },
    #[error("zero pivot in tridiagonal solve at row {row}")]
    ZeroPivot { row: usize },
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{engine}: {source}")]
    Engine {
        engine: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn unsupported(engine: &'static str, what: impl Into<String>) -> Self {
        Error::Unsupported {
            engine,
            what: what.into(),
        }
    }

    /// True for errors caused by bad user input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::UnsortedDates { .. }
            | Error::NonPositiveDate { .. }
            | Error::InvalidMaturity(_)
            | Error::InvalidParameter(_)
            | Error::Config { .. }
            | Error::Validation(_)
            | Error::MisalignedJump { .. } => true,
            Error::Engine { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
