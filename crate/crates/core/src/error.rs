use thiserror::Error;

/// Crate-wide error type. Verification failures are never errors: checkers
/// report them through [`crate::report`] types instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expressions belong to different variable contexts")]
    ContextMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadratic-extension elements carry different discriminants")]
    MixedDiscriminant,
    #[error("discriminant is negative at the evaluation point")]
    NegativeDiscriminant,
    #[error("denominator factor `{0}` evaluates to zero")]
    ZeroDenominator(String),
    #[error("assignment does not cover every variable")]
    IncompleteAssignment,
    #[error("characteristic polynomial is not the square of a quadratic")]
    NonSquareCharPoly,
    #[error("matrix does not have the expected rank ({expected} expected, {found} found)")]
    WrongRank { expected: usize, found: usize },
    #[error("constant eigenvalue cannot serve as a coordinate")]
    ConstantCoordinate,
    #[error("coordinate differential does not lie in any eigen-codistribution")]
    NotCharacteristic,
    #[error("Jacobian of the candidate coordinates is identically singular")]
    SingularJacobian,
    #[error("operator is not in lift form (nonzero B block)")]
    NotLiftForm,
    #[error("momentum relation is not linear and invertible")]
    MomentumRelation,
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("sample fell outside the admissible domain")]
    SampleOutOfDomain,
    #[error("tangent pole at the sample point")]
    TangentPole,
    #[error("no solution in the given ansatz: {0}")]
    AnsatzExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("fixture format error: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
