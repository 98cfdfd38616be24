//! Estimated weighted digraphs: edges carry an ordered sequence of bound
//! estimators instead of a scalar weight.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Index of a vertex in its owning graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// Index of an edge, in graph declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One bound-estimation procedure for an edge. Serialized as
/// `[lower, upper, time_cost]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct EstimatorSpec {
    lower: f64,
    upper: f64,
    time_cost: f64,
}

impl EstimatorSpec {
    pub fn new(lower: f64, upper: f64, time_cost: f64) -> Result<Self, GraphError> {
        let ok = lower.is_finite()
            && upper.is_finite()
            && time_cost.is_finite()
            && lower >= 0.0
            && lower <= upper
            && time_cost >= 0.0;
        if !ok {
            return Err(GraphError::InvalidEstimator {
                lower,
                upper,
                time_cost,
            });
        }
        Ok(Self {
            lower,
            upper,
            time_cost,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Simulated seconds charged each time the estimator is invoked.
    pub fn time_cost(&self) -> f64 {
        self.time_cost
    }
}

impl TryFrom<[f64; 3]> for EstimatorSpec {
    type Error = GraphError;

    fn try_from([lower, upper, time_cost]: [f64; 3]) -> Result<Self, Self::Error> {
        Self::new(lower, upper, time_cost)
    }
}

impl From<EstimatorSpec> for [f64; 3] {
    fn from(spec: EstimatorSpec) -> Self {
        [spec.lower, spec.upper, spec.time_cost]
    }
}

/// A directed edge with its estimators listed cheapest first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub estimators: Vec<EstimatorSpec>,
    /// Ground truth used by validation and test oracles only. Search never
    /// reads it.
    pub true_cost: Option<f64>,
}

impl Edge {
    /// Number of estimators, k(e).
    pub fn layers(&self) -> usize {
        self.estimators.len()
    }
}

/// Vertices `0..vertex_count` and edges in declaration order. Parallel edges
/// and self-loops are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatedDigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<EdgeId>>,
}

impl EstimatedDigraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut outgoing = vec![Vec::new(); vertex_count];
        for (i, edge) in edges.iter().enumerate() {
            for v in [edge.from, edge.to] {
                if v.0 >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v.0,
                        vertex_count,
                    });
                }
            }
            outgoing[edge.from.0].push(EdgeId(i));
        }
        Ok(Self {
            vertex_count,
            edges,
            outgoing,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    /// Outgoing edges of `v` in declaration order.
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        &self.outgoing[v.0]
    }

    /// Largest k(e) over all edges.
    pub fn max_layers(&self) -> usize {
        self.edges.iter().map(Edge::layers).max().unwrap_or(0)
    }
}

/// An SLB instance: graph, start vertex and a non-empty goal set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemFile", into = "ProblemFile")]
pub struct Problem {
    graph: EstimatedDigraph,
    start: VertexId,
    goals: Vec<VertexId>,
    is_goal: Vec<bool>,
}

impl Problem {
    pub fn new(
        graph: EstimatedDigraph,
        start: VertexId,
        goals: Vec<VertexId>,
    ) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if goals.is_empty() {
            return Err(GraphError::NoGoals);
        }
        for v in std::iter::once(start).chain(goals.iter().copied()) {
            if v.0 >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v.0,
                    vertex_count: n,
                });
            }
        }
        let mut is_goal = vec![false; n];
        for g in &goals {
            is_goal[g.0] = true;
        }
        Ok(Self {
            graph,
            start,
            goals,
            is_goal,
        })
    }

    pub fn graph(&self) -> &EstimatedDigraph {
        &self.graph
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn goals(&self) -> &[VertexId] {
        &self.goals
    }

    pub fn is_goal(&self, v: VertexId) -> bool {
        self.is_goal[v.0]
    }

    /// Same problem with a different goal set.
    pub fn with_goals(&self, goals: Vec<VertexId>) -> Result<Self, GraphError> {
        Self::new(self.graph.clone(), self.start, goals)
    }

    /// Same problem with the given edges removed (edge ids are renumbered).
    pub fn without_edges(&self, removed: &[EdgeId]) -> Result<Self, GraphError> {
        let edges = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(&EdgeId(*i)))
            .map(|(_, e)| e.clone())
            .collect();
        let graph = EstimatedDigraph::new(self.graph.vertex_count(), edges)?;
        Self::new(graph, self.start, self.goals.clone())
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical JSON: `vertex_count`, `start`, `goals`, `edges`, in that order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serialization is infallible")
    }
}

/// Wire layout of the graph JSON format.
#[derive(Clone, Serialize, Deserialize)]
struct ProblemFile {
    vertex_count: usize,
    start: VertexId,
    goals: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl TryFrom<ProblemFile> for Problem {
    type Error = GraphError;

    fn try_from(file: ProblemFile) -> Result<Self, Self::Error> {
        let graph = EstimatedDigraph::new(file.vertex_count, file.edges)?;
        Problem::new(graph, file.start, file.goals)
    }
}

impl From<Problem> for ProblemFile {
    fn from(p: Problem) -> Self {
        ProblemFile {
            vertex_count: p.graph.vertex_count,
            start: p.start,
            goals: p.goals,
            edges: p.graph.edges,
        }
    }
}

/// Ordered edge sequence ending at `terminal`. The empty path sits at the
/// start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub edges: Vec<EdgeId>,
    pub terminal: VertexId,
}

impl Path {
    pub fn empty(at: VertexId) -> Self {
        Self {
            edges: Vec::new(),
            terminal: at,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks that consecutive edges share endpoints, the first edge leaves
    /// `start` and the last one reaches `terminal`.
    pub fn is_connected(&self, graph: &EstimatedDigraph, start: VertexId) -> bool {
        let mut at = start;
        for &e in &self.edges {
            let edge = graph.edge(e);
            if edge.from != at {
                return false;
            }
            at = edge.to;
        }
        at == self.terminal
    }

    /// `from->to` pairs joined by `;`, e.g. `0->2;2->4`.
    pub fn describe(&self, graph: &EstimatedDigraph) -> String {
        self.edges
            .iter()
            .map(|&e| {
                let edge = graph.edge(e);
                format!("{}->{}", edge.from.0, edge.to.0)
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Tightest bounds known so far for one edge, plus how many estimators of its
/// sequence have been accounted for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeBoundState {
    pub tightest_lower: f64,
    pub tightest_upper: f64,
    pub next_index: usize,
}

impl Default for EdgeBoundState {
    fn default() -> Self {
        Self::unestimated()
    }
}

impl EdgeBoundState {
    /// Conceptual bounds `(0, ∞)` before any estimator ran.
    pub fn unestimated() -> Self {
        Self {
            tightest_lower: 0.0,
            tightest_upper: f64::INFINITY,
            next_index: 0,
        }
    }

    pub fn is_estimated(&self) -> bool {
        self.next_index > 0
    }

    /// Folds one estimator's bounds into the state (max lower, min upper).
    pub fn fold(&mut self, spec: &EstimatorSpec) {
        self.tightest_lower = self.tightest_lower.max(spec.lower());
        self.tightest_upper = self.tightest_upper.min(spec.upper());
    }
}

/// Tightest `(lower, upper)` for an edge with at least one applied estimator.
pub fn tightest_edge_bounds(state: &EdgeBoundState) -> Result<(f64, f64), GraphError> {
    if !state.is_estimated() {
        return Err(GraphError::Unestimated);
    }
    Ok((state.tightest_lower, state.tightest_upper))
}

/// Component-wise sum of tightest edge bounds along `path`.
pub fn path_bounds(path: &Path, states: &[EdgeBoundState]) -> Result<(f64, f64), GraphError> {
    path.edges.iter().try_fold((0.0, 0.0), |(lo, hi), &e| {
        let (l, u) =
            tightest_edge_bounds(&states[e.0]).map_err(|_| GraphError::UnestimatedEdge(e))?;
        Ok((lo + l, hi + u))
    })
}

/// Certified suboptimality factor `path_upper / l_star`. `None` when no finite
/// factor can be certified (`l_star == 0` with a positive upper bound).
pub fn admissibility_factor(path_upper: f64, l_star: f64) -> Option<f64> {
    assert!(l_star >= 0.0, "l_star must be non-negative");
    if l_star == 0.0 {
        return (path_upper == 0.0).then_some(1.0);
    }
    Some(path_upper / l_star)
}

/// A single invariant violation found by [`validate_graph`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptySequence {
        edge: EdgeId,
    },
    /// Estimator `layer` (1-based) is not contained in its predecessor's interval.
    Nesting {
        edge: EdgeId,
        layer: usize,
    },
    /// Estimator `layer` is not strictly more expensive than its predecessor.
    TimeOrder {
        edge: EdgeId,
        layer: usize,
    },
    /// The true cost lies outside estimator `layer`'s interval.
    TrueCostOutside {
        edge: EdgeId,
        layer: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySequence { edge } => write!(f, "{edge}: no estimators"),
            Violation::Nesting { edge, layer } => {
                write!(
                    f,
                    "{edge}: estimator {layer} loosens its predecessor's bounds"
                )
            }
            Violation::TimeOrder { edge, layer } => {
                write!(
                    f,
                    "{edge}: estimator {layer} is not costlier than its predecessor"
                )
            }
            Violation::TrueCostOutside { edge, layer } => {
                write!(f, "{edge}: true cost outside estimator {layer}'s bounds")
            }
        }
    }
}

/// Lists every edge-level invariant violation; an empty report means the graph
/// is valid.
pub fn validate_graph(graph: &EstimatedDigraph) -> Vec<Violation> {
    let mut report = Vec::new();
    for (i, edge) in graph.edges().iter().enumerate() {
        let id = EdgeId(i);
        if edge.estimators.is_empty() {
            report.push(Violation::EmptySequence { edge: id });
            continue;
        }
        for (j, pair) in edge.estimators.windows(2).enumerate() {
            let (prev, next) = (&pair[0], &pair[1]);
            let layer = j + 2;
            if next.lower() < prev.lower() || next.upper() > prev.upper() {
                report.push(Violation::Nesting { edge: id, layer });
            }
            if next.time_cost() <= prev.time_cost() {
                report.push(Violation::TimeOrder { edge: id, layer });
            }
        }
        if let Some(c) = edge.true_cost {
            for (j, spec) in edge.estimators.iter().enumerate() {
                if !(spec.lower() <= c && c <= spec.upper()) {
                    report.push(Violation::TrueCostOutside {
                        edge: id,
                        layer: j + 1,
                    });
                }
            }
        }
    }
    report
}
