use thiserror::Error;

/// Errors raised by bound evaluation, model construction and the exact oracles.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or summary parameter lies outside its valid region.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A bound was requested on a summary that does not meet its precondition.
    #[error("precondition failed for {method}: {reason}")]
    Precondition { method: &'static str, reason: String },

    /// The scalar objective returned NaN or +inf on too much of the search grid.
    #[error("ill-posed objective: {non_finite} of {total} grid evaluations were not finite")]
    IllPosedObjective { non_finite: usize, total: usize },

    /// An exact oracle was asked for an instance larger than it can enumerate.
    #[error("oracle out of range: {0}")]
    OracleRange(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
