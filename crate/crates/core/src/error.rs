use num_bigint::BigUint;

/// Errors raised by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is singular")]
    Singular,

    #[error("not a bijection on 1..={size}: {detail}")]
    NotBijective { size: usize, detail: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no practical hidden sum with dim U = d exists for n={n}, d={d}")]
    EmptyFamily { n: usize, d: usize },

    #[error("enumeration needs {candidates} candidate matrices, budget is {budget}")]
    BudgetExceeded { candidates: BigUint, budget: u64 },

    #[error("no closed form covers n={n}, d={d} (covered: n=2, n=3, d=1)")]
    NoClosedForm { n: usize, d: usize },

    #[error("not block-triangular under this conjugator: row {row} has support in the first {n} coordinates")]
    NotBlockTriangular { row: usize, n: usize },

    #[error("diagonal block {0} is singular")]
    SingularBlock(&'static str),

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("point is not in the solution space")]
    NotInKernel,

    #[error("rejection sampling gave up after {attempts} attempts ({accepted} accepted, acceptance rate {rate:.4})")]
    RetryCapExhausted {
        attempts: usize,
        accepted: usize,
        rate: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for malformed input (bad files, bad flags, shape errors); false for
    /// domain failures such as a singular matrix or an exhausted budget.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotBijective { .. }
                | Error::Parse { .. }
                | Error::InvalidParameter(_)
                | Error::Io(_)
        )
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
