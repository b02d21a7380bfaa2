use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("partition table covers n <= {have}, but n = {need} is required")]
    TableTooShort { need: usize, have: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cancellation check failed for d={d}, m={m}: coefficient of w^{power} is {detail}")]
    Cancellation { d: usize, m: usize, power: usize, detail: String },
}
