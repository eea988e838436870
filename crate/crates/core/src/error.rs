use std::time::{Duration, Instant};

use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Every variant maps to a short stable code (see [`Error::code`]) that the
/// CLI and the JSON reports use.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not-prime: {0} is not a prime")]
    NotPrime(u64),
    #[error("bad-degree: extension degree must be at least 1")]
    BadDegree,
    #[error("field-too-large: {p}^{k} does not fit the element encoding")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("zero-divisor: division by zero")]
    ZeroDivisor,
    #[error("field-mismatch: operands live in different fields")]
    FieldMismatch,
    #[error("zero-polynomial: operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("shape-mismatch: {0}")]
    ShapeMismatch(String),
    #[error("singular: matrix is not invertible")]
    Singular,
    #[error("bad-polynomial: {0}")]
    BadPolynomial(String),
    #[error("not-inflatable: degree {target} is below the minimum {min}")]
    NotInflatable { target: usize, min: usize },
    #[error("invalid-shift: k = {0} is not admissible for this type")]
    InvalidShift(u32),
    #[error("invalid-representative: {0}")]
    InvalidRepresentative(String),
    #[error("not-invertible: element is not in GL_n(q)")]
    NotInvertible,
    #[error("not-affine: matrix is not of the form [[1,0],[alpha,g]]")]
    NotAffine,
    #[error("classification-bug: {0}")]
    ClassificationBug(String),
    #[error("too-large: {what} has {size} elements, budget is {budget}")]
    TooLarge {
        what: String,
        size: u128,
        budget: u64,
    },
    #[error("timeout: exceeded the {0:?} time budget")]
    Timeout(Duration),
    #[error("undefined-at-n: class {label} is empty at n = {n} (needs n >= {min_n})")]
    UndefinedAtN {
        label: String,
        n: usize,
        min_n: usize,
    },
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::BadDegree => "bad-degree",
            Error::FieldTooLarge { .. } => "field-too-large",
            Error::ZeroDivisor => "zero-divisor",
            Error::FieldMismatch => "field-mismatch",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::ShapeMismatch(_) => "shape-mismatch",
            Error::Singular => "singular",
            Error::BadPolynomial(_) => "bad-polynomial",
            Error::NotInflatable { .. } => "not-inflatable",
            Error::InvalidShift(_) => "invalid-shift",
            Error::InvalidRepresentative(_) => "invalid-representative",
            Error::NotInvertible => "not-invertible",
            Error::NotAffine => "not-affine",
            Error::ClassificationBug(_) => "classification-bug",
            Error::TooLarge { .. } => "too-large",
            Error::Timeout(_) => "timeout",
            Error::UndefinedAtN { .. } => "undefined-at-n",
            Error::Parse(_) => "parse",
        }
    }

    /// True for the errors that mean "ran out of budget" rather than "wrong input".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::Timeout(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub const DEFAULT_MAX_ELEMENTS: u64 = 10_000_000;
pub const DEFAULT_MAX_SECONDS: u64 = 60;

/// Resource limits for enumerations.
///
/// `max_elements` caps how many group elements a single enumeration may
/// materialize; the deadline is checked periodically inside long loops.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_elements: u64,
    pub max_time: Option<Duration>,
    started: Instant,
}

impl Budget {
    pub fn new(max_elements: u64, max_time: Option<Duration>) -> Self {
        Budget {
            max_elements,
            max_time,
            started: Instant::now(),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX, None)
    }

    /// Same limits, clock restarted now.
    pub fn restarted(&self) -> Self {
        Budget::new(self.max_elements, self.max_time)
    }

    pub fn check_size(&self, what: &str, size: u128) -> Result<()> {
        if size > self.max_elements as u128 {
            return Err(Error::TooLarge {
                what: what.to_string(),
                size,
                budget: self.max_elements,
            });
        }
        Ok(())
    }

    pub fn check_time(&self) -> Result<()> {
        match self.max_time {
            Some(limit) if self.started.elapsed() > limit => Err(Error::Timeout(limit)),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(
            DEFAULT_MAX_ELEMENTS,
            Some(Duration::from_secs(DEFAULT_MAX_SECONDS)),
        )
    }
}
