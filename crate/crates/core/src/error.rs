use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("estimator ({lower}, {upper}, {time_cost}) violates 0 <= lower <= upper < inf, time_cost >= 0")]
    InvalidEstimator {
        lower: f64,
        upper: f64,
        time_cost: f64,
    },
    #[error("problem has no goal vertices")]
    NoGoals,
    #[error("edge has no applied estimator")]
    Unestimated,
    #[error("edge {0} on the path has no applied estimator")]
    UnestimatedEdge(EdgeId),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for GraphError {
    fn from(e: serde_json::Error) -> Self {
        GraphError::Json(e.to_string())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EstimationError {
    #[error("edge {0} has no remaining estimators")]
    Exhausted(EdgeId),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("edge {0} has no true cost")]
    MissingTrueCost(EdgeId),
    #[error("graph has {edges} edges, above the enumeration limit of {limit}")]
    TooLarge { edges: usize, limit: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("search exceeded its deadline")]
pub struct TimedOut;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("edge {from}->{to} has non-positive cost {cost}")]
    NonPositiveCost { from: usize, to: usize, cost: i64 },
    #[error("generator parameters rejected: {0}")]
    BadGenerator(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
}
