use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is defined twice")]
    DuplicateSymbol(String),
    #[error("invalid hardware: {0}")]
    InvalidHardware(String),
    #[error("invalid rule `{rule}`: {reason}")]
    InvalidRule { rule: String, reason: String },
    #[error("not an admissible word: {0}")]
    NotAdmissibleWord(String),
    #[error("word is not `{rule}`-admissible: {reason}")]
    NotAdmissible { rule: String, reason: String },
    #[error("history fails at step {index} (rule `{rule}`): {reason}")]
    FailsAtStep {
        index: usize,
        rule: String,
        reason: String,
    },
    #[error("rule `{rule}` cannot be normalized: {reason}")]
    NotNormalizable { rule: String, reason: String },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("machines do not fit together: {0}")]
    ShapeMismatch(String),
    #[error("machine is already cyclic")]
    AlreadyCyclic,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("word mixes coordinates: {0}")]
    MixedCoordinates(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("diagram construction failed: {0}")]
    Diagram(String),
    #[error("search budget exceeded after {partial} results")]
    BudgetExceeded { partial: usize },
    #[error("configuration is not accepted: {0}")]
    NotAccepted(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
