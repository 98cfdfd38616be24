//! Ground truth for tests: L* and C* by plain Dijkstra over fully estimated
//! (or true) edge weights, plus a brute-force simple-path enumerator for tiny
//! graphs.

use petgraph::algo::dijkstra;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::OracleError;
use crate::graph::{EdgeBoundState, EdgeId, EstimatedDigraph, Problem, VertexId};

/// Bound state of every edge after applying all its estimators.
pub fn full_estimate(graph: &EstimatedDigraph) -> Vec<EdgeBoundState> {
    graph
        .edges()
        .iter()
        .map(|edge| {
            let mut state = EdgeBoundState::unestimated();
            for spec in &edge.estimators {
                state.fold(spec);
            }
            state.next_index = edge.layers();
            state
        })
        .collect()
}

fn shortest_to_goals(problem: &Problem, weight: impl Fn(EdgeId) -> f64) -> f64 {
    let graph = problem.graph();
    let mut g = DiGraph::<(), f64>::with_capacity(graph.vertex_count(), graph.edge_count());
    for _ in 0..graph.vertex_count() {
        g.add_node(());
    }
    for (i, edge) in graph.edges().iter().enumerate() {
        g.add_edge(
            NodeIndex::new(edge.from.0),
            NodeIndex::new(edge.to.0),
            weight(EdgeId(i)),
        );
    }
    let dist = dijkstra(&g, NodeIndex::new(problem.start().0), None, |e| *e.weight());
    problem
        .goals()
        .iter()
        .filter_map(|v| dist.get(&NodeIndex::new(v.0)).copied())
        .fold(f64::INFINITY, f64::min)
}

/// L*: the least fully estimated path lower bound from start to any goal;
/// `f64::INFINITY` when no goal is reachable.
pub fn oracle_lstar(problem: &Problem) -> f64 {
    let full = full_estimate(problem.graph());
    shortest_to_goals(problem, |e| full[e.0].tightest_lower)
}

/// C*: the true optimal path cost. Every edge must carry `true_cost`.
pub fn oracle_cstar(problem: &Problem) -> Result<f64, OracleError> {
    let graph = problem.graph();
    let costs = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| e.true_cost.ok_or(OracleError::MissingTrueCost(EdgeId(i))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(shortest_to_goals(problem, |e| costs[e.0]))
}

/// L* by exhaustive simple-path enumeration. Refuses graphs with more than
/// `max_edges` edges.
pub fn oracle_enumerate(problem: &Problem, max_edges: usize) -> Result<f64, OracleError> {
    let graph = problem.graph();
    if graph.edge_count() > max_edges {
        return Err(OracleError::TooLarge {
            edges: graph.edge_count(),
            limit: max_edges,
        });
    }
    let lowers: Vec<f64> = full_estimate(graph)
        .iter()
        .map(|s| s.tightest_lower)
        .collect();
    let mut on_path = vec![false; graph.vertex_count()];
    let mut best = f64::INFINITY;
    enumerate(
        problem,
        &lowers,
        problem.start(),
        0.0,
        &mut on_path,
        &mut best,
    );
    Ok(best)
}

fn enumerate(
    problem: &Problem,
    lowers: &[f64],
    at: VertexId,
    cost: f64,
    on_path: &mut [bool],
    best: &mut f64,
) {
    if problem.is_goal(at) {
        *best = best.min(cost);
    }
    on_path[at.0] = true;
    for &e in problem.graph().outgoing(at) {
        let next = problem.graph().edge(e).to;
        if !on_path[next.0] {
            enumerate(problem, lowers, next, cost + lowers[e.0], on_path, best);
        }
    }
    on_path[at.0] = false;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, E02};
    use crate::graph::{Edge, EstimatorSpec};

    #[test]
    fn full_estimate_of_example() {
        let full = full_estimate(example1().graph());
        let lowers: Vec<f64> = full.iter().map(|s| s.tightest_lower).collect();
        let uppers: Vec<f64> = full.iter().map(|s| s.tightest_upper).collect();
        // e01 e02 e14 e21 e23 e24
        assert_eq!(lowers, vec![4.0, 3.0, 4.0, 3.0, 7.0, 4.0]);
        assert_eq!(uppers, vec![4.0, 5.0, 6.0, 3.0, 8.0, 6.0]);
    }

    #[test]
    fn single_estimator_bounds_verbatim() {
        let edge = Edge {
            from: VertexId(0),
            to: VertexId(1),
            estimators: vec![EstimatorSpec::new(2.5, 3.5, 1.0).unwrap()],
            true_cost: None,
        };
        let g = EstimatedDigraph::new(2, vec![edge]).unwrap();
        let full = full_estimate(&g);
        assert_eq!((full[0].tightest_lower, full[0].tightest_upper), (2.5, 3.5));
    }

    #[test]
    fn lstar_and_cstar_of_example() {
        let p = example1();
        assert_eq!(oracle_lstar(&p), 7.0);
        assert_eq!(oracle_cstar(&p), Ok(9.0));
        assert_eq!(oracle_enumerate(&p, 64), Ok(7.0));
        let only_v3 = p.with_goals(vec![VertexId(3)]).unwrap();
        assert_eq!(oracle_lstar(&only_v3), 10.0);
        assert_eq!(oracle_enumerate(&only_v3, 64), Ok(10.0));
    }

    #[test]
    fn enumerate_without_e02() {
        let p = example1()
            .with_goals(vec![VertexId(4)])
            .unwrap()
            .without_edges(&[E02])
            .unwrap();
        assert_eq!(oracle_enumerate(&p, 64), Ok(8.0));
        assert_eq!(oracle_lstar(&p), 8.0);
    }

    #[test]
    fn start_goal_and_unreachable() {
        let p = example1().with_goals(vec![VertexId(0)]).unwrap();
        assert_eq!(oracle_enumerate(&p, 64), Ok(0.0));
        assert_eq!(oracle_lstar(&p), 0.0);
        let cut = example1().without_edges(&[EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(oracle_lstar(&cut), f64::INFINITY);
        assert_eq!(oracle_cstar(&cut), Ok(f64::INFINITY));
        assert_eq!(oracle_enumerate(&cut, 64), Ok(f64::INFINITY));
    }

    #[test]
    fn errors() {
        let p = example1();
        assert_eq!(
            oracle_enumerate(&p, 5),
            Err(OracleError::TooLarge { edges: 6, limit: 5 })
        );
        let mut edges = p.graph().edges().to_vec();
        edges[3].true_cost = None;
        let g = EstimatedDigraph::new(5, edges).unwrap();
        let q = Problem::new(g, p.start(), p.goals().to_vec()).unwrap();
        assert_eq!(
            oracle_cstar(&q),
            Err(OracleError::MissingTrueCost(EdgeId(3)))
        );
    }
}
