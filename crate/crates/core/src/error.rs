use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("complexity 3g-3+n = {xi} is below 1")]
    ComplexityTooLow { xi: i64 },

    #[error("closed surfaces are unsupported (n = 0)")]
    ClosedSurfaceUnsupported,

    #[error("weight vector has length {got}, triangulation has {want} edges")]
    WeightLengthMismatch { got: usize, want: usize },

    #[error("normal matching violated in triangle {triangle}: {reason}")]
    MatchingViolation { triangle: usize, reason: String },

    #[error("curve reduces to peripheral/empty content only")]
    PeripheralOnly,

    #[error("operands live on different surfaces")]
    SurfaceMismatch,

    #[error("projection to the subsurface is empty")]
    EmptyProjection,

    #[error("candidate subsurface set is empty")]
    EmptyCandidates,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid scheme spec: {0}")]
    InvalidSpec(String),

    #[error("consecutive domains share no boundary curve at index {0}")]
    EmptyChainLink(usize),

    #[error("no filling pair found in the subsurface")]
    NotFillablePair,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("weight budget exceeded: needed about {needed}, budget {budget}")]
    WeightBudget { needed: u64, budget: u64 },

    #[error("expected a connected curve, got {components} components")]
    NotConnected { components: usize },

    #[error("subsurface is not valid here: {0}")]
    BadSubsurface(String),
}

pub type Result<T> = std::result::Result<T, Error>;
