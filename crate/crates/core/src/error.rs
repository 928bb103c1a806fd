use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands live in different ambient rings.
    #[error("incompatible operands: `{left}` vs `{right}`")]
    Incompatible { left: String, right: String },

    #[error("element is not invertible: {0}")]
    NonInvertible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested computation is outside the cases the engine handles.
    #[error("inapplicable case: {0}")]
    Inapplicable(String),

    /// Surface parameters violate the admissibility constraints.
    #[error("invalid parameters: {0}")]
    Invalid(String),

    #[error("unknown generator `{name}` for space {space}")]
    UnknownGenerator { name: String, space: String },

    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" | "))]
    Parse {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },

    /// Two independent computations disagreed.
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Mismatch(_) => 1,
            Error::Inapplicable(_) | Error::Invalid(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Incompatible { .. } => "incompatible",
            Error::NonInvertible(_) => "non_invertible",
            Error::Domain(_) => "domain",
            Error::Argument(_) => "argument",
            Error::Inapplicable(_) => "inapplicable",
            Error::Invalid(_) => "invalid",
            Error::UnknownGenerator { .. } => "unknown_generator",
            Error::Parse { .. } => "parse",
            Error::Mismatch(_) => "mismatch",
        }
    }
}
