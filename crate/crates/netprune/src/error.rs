use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the CLI's exit codes: invalid input data (3),
/// infeasible parameter combinations (4), and internal contract violations
/// such as inconsistent decider answers (5).
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or unusable input: empty sets, mixed dimensions, non-finite
    /// coordinates, zero weights, coordinates too large for grid hashing.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested quantity does not exist for this instance, e.g. a rank
    /// beyond the number of distances or a sketch family no subset satisfies.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A decider or internal routine produced answers that cannot all be
    /// true, or the driver failed to make progress within its iteration cap.
    /// This always indicates a bug in a decider or a broken problem contract.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
