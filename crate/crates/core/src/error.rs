use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{monomials} monomials but {variables} variables")]
    NonSquare { monomials: usize, variables: usize },
    #[error("exponent matrix is singular")]
    SingularExponentMatrix,
    #[error("non-positive weight for variable {var}")]
    NonPositiveWeight { var: String },
    #[error("degenerate polynomial shape: {0}")]
    DegenerateShape(String),
    #[error("{0} variables exceeds the supported maximum of 12")]
    TooManyVariables(usize),
    #[error("not of the form x0^k + f: {0}")]
    NotCyclicSplit(String),
    #[error("degenerate restriction: {0}")]
    DegenerateRestriction(String),
    #[error("group enumeration exceeded cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid group specification: {0}")]
    InvalidGroup(String),
    #[error("setup not admissible: {0}")]
    NotAdmissible(String),
    #[error("coset labels ({a1},{b1}) and ({a2},{b2}) give the same coset")]
    GradingCollision { a1: u32, b1: u32, a2: u32, b2: u32 },
    #[error("not a Fermat-supported restriction")]
    NotFermat,
    #[error("entry is on the wrong side for this map")]
    SideMismatch,
    #[error("Z coordinate {0} outside 1..k")]
    ZOutOfRange(u32),
    #[error("polynomial is not of Calabi-Yau type")]
    NotCalabiYau,
    #[error("grid does not fit the K3 pattern: {0}")]
    PatternMismatch(String),
    #[error("lattice invariants are not integral: {0}")]
    NonIntegralLattice(String),
    #[error("no catalog case named {0:?}")]
    UnknownCase(String),
    #[error("mirror duality violated: {0}")]
    DualityViolation(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::NonSquare { .. } => "NonSquare",
            Error::SingularExponentMatrix => "SingularExponentMatrix",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::DegenerateShape(_) => "DegenerateShape",
            Error::TooManyVariables(_) => "TooManyVariables",
            Error::NotCyclicSplit(_) => "NotCyclicSplit",
            Error::DegenerateRestriction(_) => "DegenerateRestriction",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::GradingCollision { .. } => "GradingCollision",
            Error::NotFermat => "NotFermat",
            Error::SideMismatch => "SideMismatch",
            Error::ZOutOfRange(_) => "ZOutOfRange",
            Error::NotCalabiYau => "NotCalabiYau",
            Error::PatternMismatch(_) => "PatternMismatch",
            Error::NonIntegralLattice(_) => "NonIntegralLattice",
            Error::UnknownCase(_) => "UnknownCase",
            Error::DualityViolation(_) => "DualityViolation",
        }
    }

    /// True for errors that indicate a defect rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::DualityViolation(_) | Error::NonIntegralLattice(_) | Error::DegenerateRestriction(_)
        )
    }
}
