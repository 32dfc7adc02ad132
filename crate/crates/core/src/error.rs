use thiserror::Error;

/// Errors raised by the algebra engine and the certificate layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("elements belong to different presentations")]
    PresentationMismatch,

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("Milnor operation Q_{index} is beyond the table (max index {max})")]
    QIndex { index: u32, max: u32 },

    #[error("Q_{index}({generator}) lies above the degree cap and is not tabulated")]
    QUntabulated { index: u32, generator: String },

    #[error("invalid Q-action table: {0}")]
    InvalidQAction(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("element is not symmetric: {0}")]
    NotSymmetric(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("scenario `{0}` declares no N^1 generators")]
    MissingDeclaration(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code for reports and exit-status mapping.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::PresentationMismatch => "presentation-mismatch",
            Error::DegreeCap { .. } => "degree-cap",
            Error::InvalidGenerator { .. } => "invalid-generator",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::NotHomogeneous => "not-homogeneous",
            Error::InvalidPresentation(_) => "invalid-presentation",
            Error::Parse { .. } => "parse",
            Error::QIndex { .. } => "q-index",
            Error::QUntabulated { .. } => "q-untabulated",
            Error::InvalidQAction(_) => "invalid-q-action",
            Error::InvalidMorphism(_) => "invalid-morphism",
            Error::NotSymmetric(_) => "not-symmetric",
            Error::OutOfRange(_) => "out-of-range",
            Error::RankMismatch(_) => "rank-mismatch",
            Error::UnknownScenario(_) => "unknown-scenario",
            Error::MissingDeclaration(_) => "missing-declaration",
            Error::Unsupported(_) => "unsupported",
        }
    }

    /// Whether the error reports a failed mathematical check rather than bad
    /// input.
    pub fn is_math_failure(&self) -> bool {
        matches!(self, Error::RankMismatch(_) | Error::InvalidQAction(_))
    }
}
