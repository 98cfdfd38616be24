use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::BenchError;

/// Integer-weighted digraph with a start/goal designation, the input of
/// estimator synthesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub vertex_count: usize,
    pub start: usize,
    pub goals: Vec<usize>,
    pub edges: Vec<WeightedEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub from: usize,
    pub to: usize,
    pub cost: i64,
}

impl WeightedDigraph {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weighted graph serialization is infallible")
    }
}

fn check_costs((lo, hi): (i64, i64)) -> Result<(), BenchError> {
    if lo < 1 || lo > hi {
        return Err(BenchError::BadGenerator(format!(
            "cost range [{lo}, {hi}] must be positive and non-empty"
        )));
    }
    Ok(())
}

/// Whether an arc may exist: nothing enters the start and nothing leaves the
/// goal.
fn allowed(from: usize, to: usize, start: usize, goal: usize) -> bool {
    from != to && to != start && from != goal
}

/// G(n, p)-style digraph on `n` vertices: each allowed ordered pair gets an
/// arc with probability `edge_prob`, costs uniform in `cost_range`. Start is
/// 0, the only goal is `n - 1`.
pub fn gen_random_graph(
    n: usize,
    edge_prob: f64,
    cost_range: (i64, i64),
    rng_seed: u64,
) -> Result<WeightedDigraph, BenchError> {
    if n < 2 {
        return Err(BenchError::BadGenerator(format!("n = {n} is below 2")));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(BenchError::BadGenerator(format!(
            "edge probability {edge_prob} outside (0, 1]"
        )));
    }
    check_costs(cost_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (start, goal) = (0, n - 1);
    let mut edges = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if allowed(from, to, start, goal) && rng.gen_bool(edge_prob) {
                let cost = rng.gen_range(cost_range.0..=cost_range.1);
                edges.push(WeightedEdge { from, to, cost });
            }
        }
    }
    Ok(WeightedDigraph {
        vertex_count: n,
        start,
        goals: vec![goal],
        edges,
    })
}

/// 4-connected grid with an arc in each direction between neighbours, start
/// top-left and goal bottom-right. Vertex `r * cols + c` is cell `(r, c)`.
pub fn gen_grid_graph(
    rows: usize,
    cols: usize,
    cost_range: (i64, i64),
    rng_seed: u64,
) -> Result<WeightedDigraph, BenchError> {
    let n = rows * cols;
    if rows == 0 || cols == 0 || n < 2 {
        return Err(BenchError::BadGenerator(format!(
            "grid {rows}x{cols} has fewer than 2 cells"
        )));
    }
    check_costs(cost_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (start, goal) = (0, n - 1);
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let from = r * cols + c;
            let mut neighbours = Vec::with_capacity(4);
            if r > 0 {
                neighbours.push(from - cols);
            }
            if c > 0 {
                neighbours.push(from - 1);
            }
            if c + 1 < cols {
                neighbours.push(from + 1);
            }
            if r + 1 < rows {
                neighbours.push(from + cols);
            }
            for to in neighbours {
                if allowed(from, to, start, goal) {
                    let cost = rng.gen_range(cost_range.0..=cost_range.1);
                    edges.push(WeightedEdge { from, to, cost });
                }
            }
        }
    }
    Ok(WeightedDigraph {
        vertex_count: n,
        start,
        goals: vec![goal],
        edges,
    })
}
