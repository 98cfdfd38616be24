//! Small hand-built instances shared by tests, docs and the CLI demo.

use crate::graph::{Edge, EdgeId, EstimatedDigraph, EstimatorSpec, Problem, VertexId};

pub const E01: EdgeId = EdgeId(0);
pub const E02: EdgeId = EdgeId(1);
pub const E14: EdgeId = EdgeId(2);
pub const E21: EdgeId = EdgeId(3);
pub const E23: EdgeId = EdgeId(4);
pub const E24: EdgeId = EdgeId(5);

fn edge(from: usize, to: usize, bounds: &[(f64, f64)], true_cost: f64) -> Edge {
    let estimators = bounds
        .iter()
        .zip([1.0, 10.0, 100.0])
        .map(|(&(l, u), t)| EstimatorSpec::new(l, u, t).expect("fixture bounds are valid"))
        .collect();
    Edge {
        from: VertexId(from),
        to: VertexId(to),
        estimators,
        true_cost: Some(true_cost),
    }
}

/// Five vertices, six edges, start `v0`, goals `{v3, v4}`. L* = 7 via
/// `e02,e24`; C* = 9 via `e01,e14`. Estimator time costs are 1 and 10.
pub fn example1() -> Problem {
    let edges = vec![
        edge(0, 1, &[(4.0, 4.0)], 4.0),
        edge(0, 2, &[(2.0, 6.0), (3.0, 5.0)], 4.0),
        edge(1, 4, &[(1.0, 10.0), (4.0, 6.0)], 5.0),
        edge(2, 1, &[(2.0, 3.0), (3.0, 3.0)], 3.0),
        edge(2, 3, &[(5.0, 9.0), (7.0, 8.0)], 7.0),
        edge(2, 4, &[(4.0, 6.0)], 6.0),
    ];
    let graph = EstimatedDigraph::new(5, edges).expect("fixture graph is valid");
    Problem::new(graph, VertexId(0), vec![VertexId(3), VertexId(4)])
        .expect("fixture problem is valid")
}
