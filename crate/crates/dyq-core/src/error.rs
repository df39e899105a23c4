use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable sets differ: {0}")]
    VariableMismatch(String),
    #[error("window: {0}")]
    Window(String),
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("shift amount must carry a power of hbar")]
    HbarFreeShift,
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing rule: {0}")]
    MissingRule(String),
    #[error("rewrite: {0}")]
    Rewrite(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("config: {0}")]
    Config(String),
    #[error("gcm: {0}")]
    Gcm(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
