use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("training diverged in epoch {epoch}")]
    Divergence { epoch: usize },
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
