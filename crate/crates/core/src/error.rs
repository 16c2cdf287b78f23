use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not an algebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("form is degenerate; not a Frobenius algebra")]
    NotFrobenius,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cochain is not a twist-invariant cocycle")]
    NotInvariantCocycle,
    #[error("averaging undefined: characteristic {characteristic} divides order {order}")]
    AveragingUndefined { characteristic: u32, order: usize },
    #[error("automorphism order not found within {0} iterations")]
    InfiniteOrder(usize),
    #[error("degree {degree} exceeds budget: {size} scalars > {budget}")]
    BudgetExceeded { degree: usize, size: u128, budget: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("generator refused: {0}")]
    GeneratorRefused(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed resolution element: {0}")]
    Malformed(String),
}
