use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The threshold pair lies in R0: no power allocation or decoding order
    /// can ever succeed, so there is no decision to return.
    #[error("thresholds are in R0: outage is inevitable for every decision")]
    InevitableOutage,

    #[error("strategy {0} is not a baseline strategy")]
    NotABaseline(String),

    #[error("strategy {0} needs user distances but no geometry was given")]
    MissingGeometry(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
