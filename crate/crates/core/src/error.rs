use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gram matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("gram matrix is not symmetric: B[{i}][{j}] = {a} but B[{j}][{i}] = {b}")]
    NotSymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error("diagonal entry B[{index}][{index}] = {value} is odd")]
    NotEvenDiagonal { index: usize, value: i64 },
    #[error("gram matrix is not positive definite: leading minor of size {size} is {value}")]
    NotPositiveDefinite { size: usize, value: String },
    #[error("matrix is singular")]
    Singular,
    #[error("twist d must be nonzero")]
    ZeroTwist,
    #[error("discriminant group order {order} exceeds enumeration cap {cap}")]
    OrderOverflow { order: String, cap: u64 },
    #[error("vector is not in the dual of the rescaled lattice (d = {d})")]
    NotInDual { d: i64 },
    #[error("expected rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("closed form disagrees with enumeration at d = {d}: closed form {closed}, enumeration {enumerated}")]
    CertificationFailure { d: i64, closed: String, enumerated: String },
    #[error("no admissible (alpha, beta, gamma) reproduces S(d); first failure at d = {d}")]
    FitFailure { d: i64 },
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("missing discriminant sum S({d})")]
    MissingSum { d: i64 },
    #[error("series have inconsistent levels: {0} vs {1}")]
    InconsistentLevels(u32, u32),
    #[error("series have inconsistent orders: {0} vs {1}")]
    InconsistentOrders(usize, usize),
    #[error("operation needs a known constant term")]
    UnknownConstant,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    /// Errors that indicate a bug in the closed forms or the numerics rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CertificationFailure { .. }
                | Error::FitFailure { .. }
                | Error::ConvergenceFailure { .. }
                | Error::InternalMismatch(_)
                | Error::OracleMismatch(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Empty => "Empty",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotEvenDiagonal { .. } => "NotEvenDiagonal",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::Singular => "Singular",
            Error::ZeroTwist => "ZeroTwist",
            Error::OrderOverflow { .. } => "OrderOverflow",
            Error::NotInDual { .. } => "NotInDual",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::CertificationFailure { .. } => "CertificationFailure",
            Error::FitFailure { .. } => "FitFailure",
            Error::DomainError(_) => "DomainError",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::InternalMismatch(_) => "InternalMismatch",
            Error::MissingSum { .. } => "MissingSum",
            Error::InconsistentLevels(..) => "InconsistentLevels",
            Error::InconsistentOrders(..) => "InconsistentOrders",
            Error::UnknownConstant => "UnknownConstant",
            Error::Overflow(_) => "Overflow",
            Error::Parse(_) => "ParseError",
            Error::OracleMismatch(_) => "OracleMismatch",
        }
    }
}
