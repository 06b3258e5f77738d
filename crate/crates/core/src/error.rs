use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (must be in [2, 2^61])")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("vertex {vertex} out of range on line {line}")]
    Range { line: usize, vertex: usize },
    #[error("size overflow: {required} exceeds cap {cap}")]
    SizeOverflow { required: u128, cap: u128 },
    #[error("cover failure: {uncovered} edges still uncovered after {colorings} colorings")]
    CoverFailure { colorings: usize, uncovered: usize },
    #[error("partition failure after {attempts} attempts")]
    PartitionFailure { attempts: usize },
    #[error("participant set is not qualified")]
    NotQualified,
    #[error("field too small: modulus {modulus}, need at least {required}")]
    FieldTooSmall { modulus: u64, required: u64 },
    #[error("no admissible target vector found after {attempts} attempts")]
    TargetSelectionFailure { attempts: usize },
    #[error("degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("enumeration too large: needs {required}, cap is {cap}")]
    EnumerationTooLarge { required: u128, cap: u128 },
    #[error("duplicate interpolation point x = {0}")]
    DuplicatePoint(u64),
    #[error("cannot draw {requested} distinct edges, only {available} exist")]
    InfeasibleCount { requested: u128, available: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format { .. }
            | Error::Range { .. }
            | Error::NotPrime(_)
            | Error::ModulusOutOfRange(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch(_)
            | Error::FieldMismatch(..)
            | Error::DuplicatePoint(_) => 2,
            Error::NotQualified => 3,
            Error::CoverFailure { .. } => 4,
            Error::PartitionFailure { .. } => 5,
            Error::EnumerationTooLarge { .. } | Error::SizeOverflow { .. } => 6,
            Error::FieldTooSmall { .. } => 7,
            Error::TargetSelectionFailure { .. } => 8,
            Error::InfeasibleCount { .. } => 9,
            Error::DivisionByZero | Error::DegreeOverflow { .. } => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
