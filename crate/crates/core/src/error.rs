use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("index ({p},{q}) out of range for n = {n}")]
    IndexOutOfRange { p: usize, q: usize, n: usize },
    #[error("box ({0},{1}) is not in the essential set")]
    NotEssential(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("permutation {0} is not lci")]
    NotLci(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("malformed pattern: {0}")]
    Pattern(String),
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("malformed minor spec: {0}")]
    Minor(String),
    #[error("division leaves a remainder: {0}")]
    NotDivisible(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),
}

impl Error {
    /// Stable code used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::PolyParse(_) => "E_PARSE",
            Error::NotLci(_) => "E_NOT_LCI",
            Error::Budget(_) => "E_BUDGET",
            Error::SizeMismatch(..) => "E_SIZE",
            Error::IndexOutOfRange { .. } => "E_RANGE",
            Error::NotEssential(..) => "E_NOT_ESSENTIAL",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Pattern(_) => "E_PATTERN",
            Error::Family(_) => "E_FAMILY",
            Error::Minor(_) => "E_MINOR",
            Error::NotDivisible(_) => "E_DIVISION",
            Error::Degree(_) => "E_DEGREE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
