//! Goal-directed search over digraphs whose edge weights are known only
//! through ordered sequences of increasingly expensive, increasingly tight
//! bound estimators.
//!
//! The solvers find a path minimizing the fully estimated path lower bound
//! (L*) while invoking as few expensive estimators as possible:
//!
//! * [`search::beauty`] - lazy best-first search with estimation and pruning
//!   thresholds, followed by a post-search tightening pass.
//! * [`anytime::a_beauty`] - repeated [`search::beauty`] calls with tightening
//!   thresholds over a shared [`estimation::EstimationCache`].
//! * [`search::ei_ucs`] - the baseline that fully estimates every edge it sees.
//!
//! [`oracle`] holds independent reference computations and [`bench`] the
//! instance generators and experiment driver.

pub mod anytime;
pub mod bench;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod search;

pub use anytime::{a_beauty, a_beauty_with, AnytimeConfig, AnytimeResult, IterationRecord};
pub use error::{BenchError, EstimationError, GraphError, OracleError, TimedOut};
pub use estimation::{EstimationCache, Invocation, Metrics, Phase};
pub use graph::{
    admissibility_factor, path_bounds, tightest_edge_bounds, validate_graph, Edge, EdgeBoundState,
    EdgeId, EstimatedDigraph, EstimatorSpec, Path, Problem, VertexId, Violation,
};
pub use search::{beauty, beauty_ps, ei_ucs, SearchResult};
