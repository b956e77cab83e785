use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit reports.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// and maps onto a process exit status (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("composition undefined: substituted denominator vanishes identically")]
    UndefinedComposition,
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("operation requires a parity-homogeneous operand")]
    MixedParity,
    #[error("derivation is not nilpotent: filtration level {0} < 2")]
    NotNilpotent(i32),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("reduced map {0} is not a Moebius transformation")]
    UnsupportedReducedMap(String),
    #[error("reduced even transition must be exactly 1/z, found {0}")]
    BadReducedMap(String),
    #[error("transition coefficient {0} has a pole away from z = 0")]
    NotLaurent(String),
    #[error("odd linear part of the transition has zero determinant")]
    DegenerateOddPart,
    #[error("matrix has determinant {0}, expected 1")]
    BadDeterminant(String),
    #[error("family {family} does not fit this manifold: {reason}")]
    FamilyShapeMismatch { family: String, reason: String },
    #[error("unknown lift family '{0}'")]
    UnknownFamily(String),
    #[error("matrix is not traceless (trace {0})")]
    NotTraceless(String),
    #[error("degree cap {cap} not saturated: dimension {dim} grows to {dim_next} at cap {next_cap}")]
    CapNotSaturated {
        cap: usize,
        next_cap: usize,
        dim: usize,
        dim_next: usize,
    },
    #[error("bracket [b{0}, b{1}] leaves the span of the basis")]
    NotClosed(usize, usize),
    #[error("basis element {0} is odd; adjoint matrices need an even element")]
    OddCartan(usize),
    #[error("adjoint action is not diagonalizable over the Gaussian rationals")]
    NotDiagonalizable,
    #[error("conjugation by the flow is not polynomial of degree at most {0} in t")]
    DegreeBoundExceeded(usize),
    #[error("pullback does not define a global automorphism")]
    NotGlobal,
    #[error("vector field is not in the span of the basis")]
    NotInSpan,
    #[error("invalid pullback data: {0}")]
    InvalidPullback(String),
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("odd variable t{var} repeated at position {pos}")]
    RepeatedOddVariable { pos: usize, var: usize },
    #[error("denominator at position {pos} contains odd variables")]
    OddDenominator { pos: usize },
    #[error("file format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::UndefinedComposition => "UndefinedComposition",
            Error::ChartMismatch(_) => "ChartMismatch",
            Error::MixedParity => "MixedParity",
            Error::NotNilpotent(_) => "NotNilpotent",
            Error::NotInvertible(_) => "NotInvertible",
            Error::UnsupportedReducedMap(_) => "UnsupportedReducedMap",
            Error::BadReducedMap(_) => "BadReducedMap",
            Error::NotLaurent(_) => "NotLaurent",
            Error::DegenerateOddPart => "DegenerateOddPart",
            Error::BadDeterminant(_) => "BadDeterminant",
            Error::FamilyShapeMismatch { .. } => "FamilyShapeMismatch",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::NotTraceless(_) => "NotTraceless",
            Error::CapNotSaturated { .. } => "CapNotSaturated",
            Error::NotClosed(..) => "NotClosed",
            Error::OddCartan(_) => "OddCartan",
            Error::NotDiagonalizable => "NotDiagonalizable",
            Error::DegreeBoundExceeded(_) => "DegreeBoundExceeded",
            Error::NotGlobal => "NotGlobal",
            Error::NotInSpan => "NotInSpan",
            Error::InvalidPullback(_) => "InvalidPullback",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::Syntax { .. } => "SyntaxError",
            Error::RepeatedOddVariable { .. } => "RepeatedOddVariable",
            Error::OddDenominator { .. } => "OddDenominator",
            Error::Format(_) => "FormatError",
            Error::Io(_) => "IoError",
        }
    }

    /// 2 for malformed or invalid input, 3 for mathematical domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::RepeatedOddVariable { .. }
            | Error::OddDenominator { .. }
            | Error::Format(_)
            | Error::Io(_)
            | Error::BadReducedMap(_)
            | Error::NotLaurent(_)
            | Error::DegenerateOddPart
            | Error::InvalidPullback(_)
            | Error::UnknownFamily(_)
            | Error::IndexOutOfRange { .. } => 2,
            _ => 3,
        }
    }
}
