use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("cyclotomic context mismatch: zeta({0}) vs zeta({1})")]
    ContextMismatch(u32, u32),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("literal parse error at {pos}: {msg}")]
    Literal { pos: usize, msg: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds cap {0}")]
    GroupOrderCap(usize),
    #[error("hom search exceeded {0} nodes")]
    SearchNodeCap(u64),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("word parse error: {0}")]
    Word(String),

    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("representation kind mismatch: {0}")]
    KindMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("invariance violated: {0}")]
    InvarianceViolation(String),
    #[error("excursion enumeration cap exceeded: {0}")]
    CombinatorialCap(String),

    #[error("algebra structure violated: {0}")]
    AlgebraAxiom(String),
    #[error("projective module data invalid: {0}")]
    ProjectiveData(String),

    #[error("pipeline disagreement: {0}")]
    PipelineDisagreement(String),
    #[error("identity check failed: {0}")]
    CheckFailed(String),

    #[error("scenario error at {path}: {msg}")]
    Scenario { path: String, msg: String },
    #[error("unknown command: {0}")]
    UnknownCommand(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn scenario(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Scenario { path: path.into(), msg: msg.into() }
    }
}
