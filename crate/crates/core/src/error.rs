use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{0} is not prime")]
    InvalidPrime(u64),

    #[error("cannot map {value} into GF({prime})")]
    NotRepresentable { value: String, prime: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("basis is linearly dependent")]
    DependentBasis,

    #[error("rational function has a pole at eps = 0")]
    PoleAtZero,

    #[error("curve matrix is singular as a rational function of eps")]
    SingularCurveMatrix,

    #[error("generator x{index} out of range for a {arity}-tuple")]
    GeneratorOutOfRange { index: usize, arity: usize },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("tuple is not in the nullcone")]
    NotNilpotent,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid orbit label: {0}")]
    InvalidLabel(String),

    #[error("a common eigenvector exists only over a field extension")]
    NeedsFieldExtension,

    #[error("component is not in the algebra generated by the chosen pair")]
    NotInAlgebra,

    #[error("no invertible intertwiner found for label {0}")]
    NoWitnessFound(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
