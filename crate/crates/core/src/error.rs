use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: i32, strands: usize },

    #[error("basis index {index} out of range for rank {rank}")]
    BasisOutOfRange { index: i32, rank: usize },

    #[error("braid is not pure")]
    NotPure,

    #[error("search exhausted its budget of {budget}")]
    Exhausted { budget: usize },

    #[error("point ({x}, {y}) lies outside the closed unit disk")]
    OutsideDisk { x: f64, y: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error(
        "configuration is outside the admissible set (segments to the base points meet); rotate the base diameter"
    )]
    NotAdmissible,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("resolution did not stabilize after {max_resolution} steps per twist")]
    Unstable { max_resolution: usize },

    #[error("measure is not invariant under the map: {0}")]
    NotInvariant(String),

    #[error("every sample was rejected as inadmissible ({rejected} draws)")]
    AllRejected { rejected: usize },

    #[error("composition depth {depth} exceeds the limit of {limit} twists")]
    DepthOverflow { depth: usize, limit: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
