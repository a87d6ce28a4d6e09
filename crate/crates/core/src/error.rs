use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({u}, {v}) has invalid cost {cost}")]
    InvalidCost { u: usize, v: usize, cost: f64 },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate undirected edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} has invalid length {value}")]
    InvalidLength { edge: usize, value: f64 },

    #[error("traffic log is empty")]
    EmptyLog,
    #[error("traffic entry {index} has non-positive volume {volume}")]
    InvalidVolume { index: usize, volume: f64 },
    #[error("traffic entry {index} has identical endpoints {vertex}")]
    SameEndpoints { index: usize, vertex: usize },
    #[error("traffic entries {first} and {second} share the unordered pair ({s}, {t})")]
    DuplicatePair { first: usize, second: usize, s: usize, t: usize },
    #[error("traffic pair {index} has zero distance; stretch is undefined")]
    ZeroDistance { index: usize },
    #[error("no traffic pair is connected in the full graph")]
    NoConnectedPair,
    #[error("distance vector has {got} entries, log has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid smoothing constant {0}")]
    InvalidSmoothing(f64),
    #[error("edge {edge} has zero benefit and zero smoothing; effective length undefined")]
    ZeroBenefit { edge: usize },

    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("landmark count {requested} exceeds vertex count {n}")]
    TooManyLandmarks { requested: usize, n: usize },
    #[error("spanner stretch parameter must be >= 1, got {0}")]
    InvalidStretch(f64),

    #[error("cannot draw {requested} distinct pairs from {n} vertices")]
    UnsatisfiablePairs { requested: usize, n: usize },
    #[error("invalid traffic distribution: {0}")]
    InvalidDistribution(String),
    #[error("set cover instance is degenerate: {0}")]
    DegenerateSetCover(String),
    #[error("exhaustive search over {edges} edges exceeds the limit of {limit}")]
    InstanceTooLarge { edges: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(String, String),
    #[error("missing coordinates for vertex `{0}`")]
    MissingCoordinates(String),
}
