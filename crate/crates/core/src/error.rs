use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("class is not integral in the lattice")]
    NotIntegral,

    #[error("division by zero")]
    ZeroDivisor,

    #[error("zero class has no primitivity")]
    ZeroClass,

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("self-loop on curve `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),

    #[error("generator `{name}` pairs non-integrally with curve `{curve}`")]
    NonIntegralGenerator { name: String, curve: String },

    #[error("sub-diagram null space has dimension {0}, expected 1")]
    NullSpaceDimension(usize),

    #[error("null vector of the sub-diagram has mixed signs")]
    MixedSignNullVector,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Weyl reduction failed to terminate: {0}")]
    NonTermination(String),

    #[error("model integrity check failed: {0}")]
    ModelIntegrity(String),

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("3-divisibility of the sequence sum fails")]
    NotThreeDivisible,

    #[error("Φ(H) = {0}, expected 3")]
    PhiNotThree(u64),

    #[error("tail is not the full tail: {0}")]
    NotFullTail(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no reference class pairing positively with every curve was found")]
    NoReferenceClass,

    #[error("search too large: {0}")]
    SearchTooLarge(String),
}
