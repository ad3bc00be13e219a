use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimensions must be positive (got d = {d}, k = {k})")]
    EmptyDimension { d: usize, k: usize },
    #[error("d·k = {modes} modes exceeds the 64-mode bit-mask capacity")]
    TooManyModes { modes: usize },
    #[error("d·k = {dk} exceeds the Fock basis guard of {max}")]
    GuardExceeded { dk: usize, max: usize },
    #[error("mode (p = {p}, tau = {tau}) outside d = {d}, k = {k}")]
    IndexOutOfRange { p: usize, tau: usize, d: usize, k: usize },
    #[error("operands live on different Fock spaces")]
    DimensionMismatch,
    #[error("vector leaves the span of the given basis (state {0:#b})")]
    OutsideBasis(u64),
    #[error("basis states are not pairwise distinct")]
    DuplicateBasisState,
    #[error("symplectic dimension must be even (got d = {0})")]
    OddSymplecticDimension(usize),
    #[error("kind index must be nonzero and within ±{k} (got {tau})")]
    BadKindIndex { tau: i64, k: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("value {0} is not a half-integer")]
    NotHalfInteger(String),
    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),
    #[error("Cartan operator is not diagonal on state {0:#b}")]
    NonDiagonalCartan(u64),
    #[error("expected k = 2 for the quasispin analysis (got k = {0})")]
    QuasispinNeedsTwoKinds(usize),
    #[error("reflection partner not found for record {0}")]
    PartnerNotFound(usize),
    #[error("tensor of rank {n} over d = {d} exceeds the dense-table guard")]
    TensorGuard { n: usize, d: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
