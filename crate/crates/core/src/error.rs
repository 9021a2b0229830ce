use thiserror::Error;

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex out of range: {0}")]
    VertexOutOfRange(usize),
    #[error("invalid substrate: {0}")]
    InvalidSubstrate(String),
    #[error("substrate unsupported: {0}")]
    SubstrateUnsupported(&'static str),
    #[error("level exceeds window: level {level} > {max}")]
    LevelExceedsWindow { level: u32, max: u32 },
    #[error("side must be dyadic (got {0})")]
    SideNotDyadic(usize),
    #[error("invalid interval set: {0}")]
    InvalidIntervalSet(&'static str),
    #[error("oracle cap: {0} intervals exceeds the limit of {1}")]
    OracleCap(usize, usize),
    #[error("delta too large: 2*{delta} exceeds minimal interval length {min_len}")]
    DeltaTooLarge { delta: i64, min_len: i64 },
    #[error("certificate violation: {0}")]
    CertificateViolation(String),
    #[error("H_n must be connected (level {0})")]
    DisconnectedLevel(usize),
    #[error("empty subgraph sequence")]
    EmptySequence,
    #[error("H sequence not nested")]
    NotNested,
    #[error("adjacency precondition failed: component containing vertex {0} has no eligible anchor")]
    AdjacencyPrecondition(usize),
    #[error("window exhausted at stage {0}")]
    WindowExhausted(usize),
    #[error("state required: {0}")]
    StateRequired(&'static str),
    #[error("degenerate sample: {0} open vertices")]
    DegenerateSample(usize),
    #[error("n exceeds window: position {0} is outside the core")]
    ExceedsWindow(i64),
    #[error("MTP check requires transitive window")]
    NotTransitive,
    #[error("empty input")]
    EmptyInput,
}

pub type Result<T> = std::result::Result<T, Error>;
