use num_bigint::BigInt;
use thiserror::Error;

use crate::qcomb::Count;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the parameters was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A division that must be exact left a remainder.
    #[error("integrality violation in {context}: {numerator} is not divisible by {denominator}")]
    Integrality {
        numerator: BigInt,
        denominator: BigInt,
        context: String,
    },

    /// The ratio A_l / A_{l+1} is undefined because A_{l+1} = 0.
    #[error(
        "degenerate ratio at (n={n}, k={k}, l={l}, q={q}): \
         no self-orthogonal [{n},{n2}] code exists when q = 3 (mod 4) and n = 2 (mod 4), \
         so the count at hull dimension l+1 is zero"
    , n2 = n / 2)]
    DegenerateRatio { n: u32, k: u32, l: u32, q: u32 },

    /// An enumeration would exceed the configured work limit.
    #[error("resource guard: the request needs {needed} {unit}, limit is {limit}")]
    GuardExceeded {
        needed: Count,
        limit: Count,
        unit: &'static str,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two routes to the same quantity disagreed.
    #[error("verification failed: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Mismatch(_) | Error::Integrality { .. } => 1,
            Error::GuardExceeded { .. } => 3,
            Error::Io(_) | Error::Json(_) => 1,
            Error::Domain(_) | Error::DegenerateRatio { .. } | Error::Unsupported(_) => 2,
        }
    }
}
