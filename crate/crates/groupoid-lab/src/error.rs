use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("arrows are not composable: {0}")]
    NotComposable(String),

    #[error("point outside bisection domain: {0}")]
    OutsideDomain(String),

    #[error("support window grew past the configured cap: {0}")]
    WindowOverflow(String),

    #[error("depth {have} is insufficient, need at least {need}")]
    DepthInsufficient { have: usize, need: usize },

    #[error("conditioning on a null set: {0}")]
    ConditioningOnNull(String),

    #[error("declared cover failed verification: {0}")]
    InvalidCover(String),

    #[error("chain construction failed: {0}")]
    ChainConstruction(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
