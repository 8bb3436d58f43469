use alloc::boxed::Box;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by an enclosure that may contain zero")]
    DivisionByZero,
    #[error("enclosure meets the branch cut of the principal logarithm")]
    BranchCut,
    #[error("enclosure may contain a pole of the gamma function")]
    Pole,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("non-finite value produced")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("verification failed: {0}")]
    Verification(&'static str),
    #[error("numerical decomposition failed: {0}")]
    Decomposition(&'static str),
    #[error("block diagonalization failed: {0}")]
    Vbd(Box<Error>),
    #[error("spectrum guard failed: an eigenvalue may be a nonpositive integer")]
    Guard,
    #[error("block {index}: {source}")]
    Block { index: usize, source: Box<Error> },
    #[error("reassembly failed: {0}")]
    Reassembly(Box<Error>),
}

/// Pipeline stage an error is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Vbd,
    Guard,
    Block,
    Reassembly,
    Other,
}

impl Error {
    pub fn stage(&self) -> Stage {
        match self {
            Error::Vbd(_) => Stage::Vbd,
            Error::Guard => Stage::Guard,
            Error::Block { .. } => Stage::Block,
            Error::Reassembly(_) => Stage::Reassembly,
            _ => Stage::Other,
        }
    }

    pub(crate) fn vbd(e: Error) -> Error {
        match e {
            Error::Vbd(_) => e,
            other => Error::Vbd(Box::new(other)),
        }
    }
}
