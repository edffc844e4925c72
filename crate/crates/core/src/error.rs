use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order {0} exceeds the supported maximum of {max}", max = crate::field::MAX_ORDER)]
    FieldTooLarge(u64),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("entry {value} is not an element of GF({q})")]
    InvalidEntry { value: u32, q: u32 },

    #[error("enumeration of {what} exceeds the cap of 2^{cap_log2} items")]
    TooLarge { what: String, cap_log2: u32 },

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("inconsistent weight enumerator: {0}")]
    Inconsistent(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("k_q oracle undefined at (n={n}, d={d})")]
    OracleDomain { n: usize, d: usize },

    #[error("gave up after {0} resampling attempts")]
    RetryExhausted(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. } | Error::BudgetExceeded(_) | Error::RetryExhausted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
