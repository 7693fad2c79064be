use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least {needed} complete regeneration blocks, found {found}")]
    InsufficientBlocks { needed: usize, found: usize },

    #[error("block variance estimate is zero, studentized statistic undefined")]
    ZeroVariance,

    #[error("degenerate RBB draw: first resampled block alone is longer than n")]
    DegenerateDraw,

    #[error("too many degenerate bootstrap draws: {degenerate} for {replicates} replicates")]
    TooManyDegenerate {
        degenerate: usize,
        replicates: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty sample")]
    EmptySample,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
