use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Error, Debug)]
pub enum Phi4Error {
    /// A structural precondition on lattice geometry was violated.
    #[error("lattice constraint violated: {0}")]
    Lattice(String),

    /// An operation received a field in the wrong domain (physical vs fourier).
    #[error("domain mismatch: expected {expected} field, got {got}")]
    Domain {
        expected: &'static str,
        got: &'static str,
    },

    /// Two operands live on different lattices.
    #[error("operands live on different lattices")]
    LatticeMismatch,

    /// Trajectory operands disagree about their time grid.
    #[error("time grid mismatch: {0}")]
    TimeGrid(String),

    /// A scalar argument is outside its admissible range.
    #[error("argument out of range: {0}")]
    Argument(String),

    /// Configuration file problem (parse error or violated invariant).
    #[error("config error: {0}")]
    Config(String),

    /// A config key that is not part of the schema, with a suggestion.
    #[error("unknown config key `{key}`; nearest known key is `{nearest}`")]
    UnknownKey { key: String, nearest: String },

    /// The integrator produced NaN/Inf or tripped a stability guard.
    #[error("numerical abort: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Snapshot file corrupt or with an incompatible header.
    #[error("snapshot format error: {0}")]
    Snapshot(String),
}

pub type Result<T> = std::result::Result<T, Phi4Error>;
