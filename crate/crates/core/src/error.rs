use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `n = 0` passed to an operation whose domain is `n >= 1`.
    #[error("{op}: n must be at least 1 (got n = 0)")]
    ZeroN { op: &'static str },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(op: &'static str, n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroN { op })
    } else {
        Ok(())
    }
}
