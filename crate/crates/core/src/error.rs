use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate node id {0:?}")]
    DuplicateNodeId(String),

    #[error("edge {edge_index} references unknown node {id:?}")]
    DanglingEdge { id: String, edge_index: usize },

    #[error("node {0:?} has a non-finite coordinate")]
    NonFiniteCoordinate(String),

    #[error("node id must not be empty (node {0})")]
    EmptyNodeId(usize),

    #[error("network has no nodes")]
    EmptyNetwork,

    #[error("invalid viewport: {0}")]
    InvalidViewport(String),

    #[error("thresholds must satisfy 0 <= near_max <= medium_max <= 1 (got near_max={near_max}, medium_max={medium_max})")]
    InvalidThresholds { near_max: f64, medium_max: f64 },

    #[error("latitude {0} is outside [-90, 90]")]
    LatitudeOutOfRange(f64),

    #[error("header mismatch: expected {expected:?}, got {got:?}")]
    HeaderMismatch { expected: String, got: String },

    #[error("bad number on line {line}, column {column}")]
    BadNumber { line: u64, column: String },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("document is not a GeoJSON FeatureCollection")]
    NotFeatureCollection,

    #[error("feature {feature} is missing property {name:?}")]
    MissingProperty { feature: usize, name: String },

    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),

    #[error("unknown {kind} {name:?} (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
