use thiserror::Error;

/// Errors raised by the model, graph and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid element token `{token}`: {reason}")]
    InvalidToken { token: String, reason: &'static str },

    #[error("`{part}` is not a submultiset of `{ground}`")]
    NotSubmultiset { part: String, ground: String },

    #[error("split sides `{left}` | `{right}` do not sum to the ground `{ground}`")]
    SidesDoNotSumToGround {
        left: String,
        right: String,
        ground: String,
    },

    #[error("split parts must be nonempty")]
    EmptyPart,

    #[error("splits are defined over different ground multisets")]
    GroundMismatch,

    #[error("split index {index} is out of range for a system of {len} splits")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("a split pair needs two distinct indices, got {0} twice")]
    SameSplitIndex(usize),

    #[error("system has {n} splits; at most {max} are supported")]
    TooManySplits { n: usize, max: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("arc selection is not a thin subgraph: {0}")]
    NotThin(String),

    #[error("thin subgraph is not consistent")]
    Inconsistent,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Tree(#[from] crate::mtree::TreeError),
}

pub type Result<T> = std::result::Result<T, Error>;
