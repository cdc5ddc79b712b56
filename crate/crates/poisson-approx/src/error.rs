use thiserror::Error;

/// Failures reported by the bound calculators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The bound exists but its precondition fails for these inputs.
    #[error("bound not applicable: {0}")]
    Inapplicable(String),
    /// A dependency model declares `beta` as a neighbor of `alpha` without
    /// supplying E[X_alpha X_beta].
    #[error("missing pair moment for neighbor pair ({alpha}, {beta})")]
    MissingPairMoment { alpha: usize, beta: usize },
    /// The cubic has a zero leading coefficient.
    #[error("degenerate cubic: leading coefficient is zero")]
    DegenerateCubic,
    /// A summary statistic needed by the bound was not provided.
    #[error("missing moment: {0}")]
    MissingMoment(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn inapplicable(msg: impl Into<String>) -> Error {
    Error::Inapplicable(msg.into())
}
