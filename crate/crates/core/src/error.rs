use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient of {word} requested but series is truncated at degree {cap}")]
    QueryBeyondCap { word: String, cap: usize },

    #[error("alphabet mismatch: {left} letters vs {right} letters")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("series is not shuffle invertible: constant term is zero")]
    NotInvertible,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("letter x{letter} outside alphabet of size {m}")]
    LetterOutOfRange { letter: usize, m: usize },

    #[error("generator {0} has no assigned value")]
    UnboundGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time {t} outside signal grid [0, {omega}]")]
    OutOfGrid { t: f64, omega: f64 },

    #[error("solution escaped bound {bound} at t = {t}")]
    Blowup { t: f64, bound: f64 },

    #[error("denominator 1 - r E_x1[u](t) = {value} fell below margin at t = {t}")]
    DenominatorVanished { t: f64, value: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("antipode algorithms disagree on {0}")]
    AlgorithmMismatch(String),
}
