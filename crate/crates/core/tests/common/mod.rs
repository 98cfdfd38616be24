#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slb::bench::{gen_grid_graph, gen_random_graph, synth_estimators, SynthConfig};
use slb::{Edge, EstimatedDigraph, EstimatorSpec, Problem, VertexId};

/// Random graph with synthesized three-layer estimators.
pub fn synthesized(n: usize, p: f64, seed: u64) -> Problem {
    let weighted = gen_random_graph(n, p, (1, 20), seed).unwrap();
    synth_estimators(&weighted, &SynthConfig::new(seed % 9)).unwrap()
}

/// Random graph whose edges get 1..=3 nested integer estimators with
/// independent widths, so estimator counts and gaps vary per edge.
pub fn free_form(seed: u64, max_n: usize) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let p = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from != to && rng.gen_bool(p) {
                let c: u32 = rng.gen_range(0..15);
                let k = rng.gen_range(1..=3);
                let mut lowers: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=c)).collect();
                lowers.sort_unstable();
                *lowers.last_mut().unwrap() = rng.gen_range(lowers[k - 1]..=c);
                let mut uppers: Vec<u32> = (0..k).map(|_| c + rng.gen_range(0..10)).collect();
                uppers.sort_unstable_by(|a, b| b.cmp(a));
                let estimators = (0..k)
                    .map(|i| {
                        EstimatorSpec::new(lowers[i] as f64, uppers[i] as f64, 10f64.powi(i as i32))
                            .unwrap()
                    })
                    .collect();
                edges.push(Edge {
                    from: VertexId(from),
                    to: VertexId(to),
                    estimators,
                    true_cost: Some(c as f64),
                });
            }
        }
    }
    let graph = EstimatedDigraph::new(n, edges).unwrap();
    let goals = if rng.gen_bool(0.3) {
        vec![VertexId(n - 1), VertexId(rng.gen_range(0..n))]
    } else {
        vec![VertexId(n - 1)]
    };
    Problem::new(graph, VertexId(0), goals).unwrap()
}

/// Mixed small instances (at most 12 vertices) for enumeration checks.
pub fn small(seed: u64) -> Problem {
    if seed.is_multiple_of(2) {
        free_form(seed, 12)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        synthesized(rng.gen_range(2..=12), rng.gen_range(0.15..0.6), seed)
    }
}

/// Larger instances, up to 500 vertices.
pub fn large(seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    match seed % 3 {
        0 => {
            let n = rng.gen_range(50..=500);
            synthesized(n, 4.0 / n as f64, seed)
        }
        1 => {
            let side = rng.gen_range(5..=22);
            let w = gen_grid_graph(side, side, (1, 9), seed).unwrap();
            synth_estimators(&w, &SynthConfig::new(seed % 9)).unwrap()
        }
        _ => free_form(seed, 60),
    }
}
