use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice size L = {size}: {reason}")]
    InvalidSize { size: i64, reason: &'static str },

    #[error("length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("unknown face id {0}")]
    UnknownFace(usize),

    #[error("plaquette operators on faces {0} and {1} anticommute")]
    Anticommuting(usize, usize),

    #[error("no closed string operator along {0} commutes with every plaquette")]
    NoStringPath(char),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("surface region is disconnected")]
    DisconnectedRegion,

    #[error("loop operator is not closed (violates {0} plaquettes)")]
    OpenLoop(usize),

    #[error("enumeration guard: {what} dimension {dim} exceeds the limit {limit}")]
    Guard {
        what: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "specific-heat peak for L = {size} sits at the grid boundary ({coupling}); widen the grid"
    )]
    PeakAtBoundary { size: usize, coupling: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
