use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inconsistent assignment: {0}")]
    InconsistentAssignment(String),
    #[error("value depends on the adjoined root and no value for it was supplied")]
    UnresolvedRoot,
    #[error("operands live over different bases")]
    BasisMismatch,
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),
    #[error("unsupported grade: {0}")]
    GradeError(String),
    #[error("degenerate bivector: rank {rank} on a block of size {size}")]
    DegenerateBivector { rank: usize, size: usize },
    #[error("operator does not square to minus the identity")]
    NotAComplexStructure,
    #[error("context has no metric")]
    MissingMetric,
    #[error("operator is not orthogonal for the metric")]
    NotCompatible,
    #[error("context has no complex structures I, J, K")]
    MissingStructures,
    #[error("basis is not quaternionic-Hermitian: {0}")]
    NotQuaternionicHermitian(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("malformed root system: {0}")]
    MalformedRootSystem(String),
    #[error("singular matrix")]
    Singular,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("mismatched root relations")]
    RootMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
