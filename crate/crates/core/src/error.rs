use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arc ({0}, {1}) is not butterfly-contractible")]
    NotButterfly(usize, usize),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("contract step rejected: {0}")]
    ContractStep(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
