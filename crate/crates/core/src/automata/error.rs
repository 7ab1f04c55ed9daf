use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("unknown track `{0}`")]
    UnknownTrack(String),
    #[error("track mismatch: {left:?} vs {right:?}")]
    TrackMismatch { left: Vec<String>, right: Vec<String> },
    #[error("invalid track list {0:?}")]
    InvalidTracks(Vec<String>),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("automaton is not zero-robust (initial state lacks a zero self-loop)")]
    NotZeroRobust,
    #[error("input DFAO is not minimal")]
    NotMinimal,
    #[error("input widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("acceptors do not partition the domain at {witness:?}: {detail}")]
    PartitionViolation { witness: Vec<u64>, detail: String },
    #[error("state ceiling hit: {states} states exceeds limit {limit}")]
    ResourceLimit { states: usize, limit: usize },
}
