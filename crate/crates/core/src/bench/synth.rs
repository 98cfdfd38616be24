use serde::{Deserialize, Serialize};

use crate::bench::WeightedDigraph;
use crate::error::BenchError;
use crate::graph::{Edge, EstimatedDigraph, EstimatorSpec, Problem, VertexId};

/// Multiplier columns `(f1, f2, f3)` labelled by hash values 1..=9.
pub const DEFAULT_TABLE: [[u32; 3]; 9] = [
    [1, 2, 3],
    [2, 3, 4],
    [3, 4, 5],
    [1, 3, 4],
    [2, 4, 5],
    [3, 5, 6],
    [1, 4, 5],
    [2, 5, 6],
    [3, 6, 7],
];

pub const DEFAULT_TIME_COSTS: [f64; 3] = [1.0, 10.0, 100.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub hash_table: [[u32; 3]; 9],
    pub time_costs: [f64; 3],
}

impl SynthConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            hash_table: DEFAULT_TABLE,
            time_costs: DEFAULT_TIME_COSTS,
        }
    }

    /// Every column needs `1 <= f1 < f2 < f3`; time costs must strictly
    /// increase.
    pub fn check(&self) -> Result<(), BenchError> {
        for (i, &[f1, f2, f3]) in self.hash_table.iter().enumerate() {
            if !(1 <= f1 && f1 < f2 && f2 < f3) {
                return Err(BenchError::BadGenerator(format!(
                    "hash column {} = ({f1}, {f2}, {f3}) is not increasing from 1",
                    i + 1
                )));
            }
        }
        let [t1, t2, t3] = self.time_costs;
        if !(0.0 <= t1 && t1 < t2 && t2 < t3 && t3.is_finite()) {
            return Err(BenchError::BadGenerator(
                "time costs must strictly increase".into(),
            ));
        }
        Ok(())
    }
}

/// Table column label (1..=9) chosen for an edge of cost `c_old`.
/// `(c_old + seed) mod 9` is read modulo 9, so a residue of 0 selects
/// column 9.
pub fn hash_column(c_old: u64, seed: u64) -> usize {
    match (c_old % 9 + seed % 9) % 9 {
        0 => 9,
        h => h as usize,
    }
}

/// Turns integer edge costs into three nested lower-bound estimators per edge:
/// lowers `c_old * (f1, f2, f3)`, uppers and true cost all `c_old * f3`.
pub fn synth_estimators(
    weighted: &WeightedDigraph,
    config: &SynthConfig,
) -> Result<Problem, BenchError> {
    config.check()?;
    let edges = weighted
        .edges
        .iter()
        .map(|e| {
            if e.cost <= 0 {
                return Err(BenchError::NonPositiveCost {
                    from: e.from,
                    to: e.to,
                    cost: e.cost,
                });
            }
            let c = e.cost as u64;
            let factors = config.hash_table[hash_column(c, config.seed) - 1];
            let top = (c * factors[2] as u64) as f64;
            let estimators = factors
                .iter()
                .zip(config.time_costs)
                .map(|(&f, t)| EstimatorSpec::new((c * f as u64) as f64, top, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Edge {
                from: VertexId(e.from),
                to: VertexId(e.to),
                estimators,
                true_cost: Some(top),
            })
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    let graph = EstimatedDigraph::new(weighted.vertex_count, edges)?;
    let goals = weighted.goals.iter().map(|&g| VertexId(g)).collect();
    Ok(Problem::new(graph, VertexId(weighted.start), goals)?)
}
