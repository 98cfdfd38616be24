//! Experiment driver: every (instance, seed) cell is solved by EI-UCS and by
//! each requested algorithm; effort ratios are taken against EI-UCS.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anytime::{a_beauty_with, AnytimeConfig};
use crate::bench::generate::{gen_grid_graph, gen_random_graph, WeightedDigraph};
use crate::bench::stats::Stats;
use crate::bench::synth::{synth_estimators, SynthConfig};
use crate::error::{BenchError, TimedOut};
use crate::estimation::{EstimationCache, Metrics};
use crate::graph::Problem;
use crate::search::{beauty_until, ei_ucs_until};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    EiUcs,
    /// BEAUTY with both thresholds at infinity.
    Beauty,
    /// A-BEAUTY with the given call budget.
    ABeauty(usize),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::EiUcs => write!(f, "eiucs"),
            Algorithm::Beauty => write!(f, "beauty"),
            Algorithm::ABeauty(n) => write!(f, "abeauty-{n}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "eiucs" | "ei-ucs" => Ok(Algorithm::EiUcs),
            "beauty" => Ok(Algorithm::Beauty),
            "abeauty" => Ok(Algorithm::ABeauty(10)),
            other => other
                .strip_prefix("abeauty")
                .map(|n| n.trim_start_matches('-'))
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Algorithm::ABeauty)
                .ok_or_else(|| format!("unknown algorithm {s:?}")),
        }
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One instance source. Generated and weighted-file instances get estimators
/// synthesized once per suite seed; estimated-graph files run once as-is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Random {
        n: usize,
        edge_prob: f64,
        cost_min: i64,
        cost_max: i64,
        rng_seed: u64,
    },
    Grid {
        rows: usize,
        cols: usize,
        cost_min: i64,
        cost_max: i64,
        rng_seed: u64,
    },
    Weighted {
        path: PathBuf,
    },
    Estimated {
        path: PathBuf,
    },
}

impl InstanceSpec {
    fn name(&self) -> String {
        match self {
            InstanceSpec::Random {
                n,
                edge_prob,
                cost_min,
                cost_max,
                rng_seed,
            } => format!("random-n{n}-p{edge_prob}-c{cost_min}_{cost_max}-r{rng_seed}"),
            InstanceSpec::Grid {
                rows,
                cols,
                cost_min,
                cost_max,
                rng_seed,
            } => format!("grid-{rows}x{cols}-c{cost_min}_{cost_max}-r{rng_seed}"),
            InstanceSpec::Weighted { path } | InstanceSpec::Estimated { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }
}

fn default_timeout() -> f64 {
    60.0
}

fn default_tau_v() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub instances: Vec<InstanceSpec>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_timeout")]
    pub timeout_seconds: f64,
    #[serde(default = "default_tau_v")]
    pub tau_v: f64,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// One metrics CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub w_1: u64,
    pub w_2: u64,
    pub w_3: u64,
    pub expansions: u64,
    pub evaluations: u64,
    pub prunings: u64,
    #[serde(rename = "T_w")]
    pub t_w: f64,
    #[serde(rename = "T_v")]
    pub t_v: f64,
    pub l_under: f64,
    pub l_over: f64,
    pub optimal_flag: bool,
    pub iterations: usize,
}

impl RunRow {
    pub fn new(
        instance_id: &str,
        algorithm: Algorithm,
        metrics: &Metrics,
        l_under: f64,
        l_over: f64,
        optimal: bool,
        iterations: usize,
    ) -> Self {
        Self {
            instance_id: instance_id.to_string(),
            algorithm,
            w_1: metrics.w(1),
            w_2: metrics.w(2),
            w_3: metrics.w(3),
            expansions: metrics.expansions,
            evaluations: metrics.evaluations,
            prunings: metrics.prunings,
            t_w: metrics.estimation_time,
            t_v: metrics.search_time(),
            l_under,
            l_over,
            optimal_flag: optimal,
            iterations,
        }
    }
}

/// Effort of one algorithm on one instance relative to EI-UCS.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub final_layer: u64,
    pub final_layer_eiucs: u64,
    /// Final-layer invocations over EI-UCS's; empty when EI-UCS used none.
    pub r_l3: Option<f64>,
    pub r_exp: Option<f64>,
    pub l_star: f64,
}

/// One anytime iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRow {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub iteration: usize,
    pub path: String,
    pub l_under: f64,
    pub l_over: f64,
    pub l_est: f64,
    pub l_prune: f64,
    pub forced: bool,
    pub opt: bool,
    pub expansions: u64,
    pub evaluations: u64,
    pub prunings: u64,
    pub w_1: u64,
    pub w_2: u64,
    pub w_3: u64,
    #[serde(rename = "T_w")]
    pub t_w: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub instances: usize,
    pub r_l3: Option<Stats>,
    pub r_exp: Option<Stats>,
}

/// Per-iteration behaviour of one anytime algorithm over the suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnytimeSummary {
    pub algorithm: Algorithm,
    /// Entry `i` summarizes `l_under / L*` at iteration `i + 1`.
    pub convergence: Vec<Option<Stats>>,
    /// Entry `i` summarizes `prunings / evaluations` at iteration `i + 1`.
    pub pruning: Vec<Option<Stats>>,
    /// Entry `i` counts instances that finished at iteration `i + 1`.
    pub final_iteration_histogram: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub runs: Vec<RunRow>,
    pub ratios: Vec<RatioRow>,
    pub iterations: Vec<IterationRow>,
    pub summaries: Vec<AlgorithmSummary>,
    pub anytime: Vec<AnytimeSummary>,
    /// Instances excluded from aggregates because some run timed out.
    pub timeouts: Vec<String>,
    /// Instances where an algorithm's L* differs from EI-UCS's.
    pub disagreements: Vec<String>,
}

impl SuiteReport {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }

    pub fn anytime_summary(&self, algorithm: Algorithm) -> Option<&AnytimeSummary> {
        self.anytime.iter().find(|s| s.algorithm == algorithm)
    }
}

struct Cell {
    id: String,
    problem: Problem,
}

struct CellOutcome {
    runs: Vec<RunRow>,
    ratios: Vec<RatioRow>,
    iterations: Vec<IterationRow>,
    disagreement: bool,
}

fn read(path: &FsPath) -> Result<String, BenchError> {
    fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn build_cells(config: &SuiteConfig, base_dir: &FsPath) -> Result<Vec<Cell>, BenchError> {
    let mut cells = Vec::new();
    for spec in &config.instances {
        let weighted = match spec {
            InstanceSpec::Random {
                n,
                edge_prob,
                cost_min,
                cost_max,
                rng_seed,
            } => gen_random_graph(*n, *edge_prob, (*cost_min, *cost_max), *rng_seed)?,
            InstanceSpec::Grid {
                rows,
                cols,
                cost_min,
                cost_max,
                rng_seed,
            } => gen_grid_graph(*rows, *cols, (*cost_min, *cost_max), *rng_seed)?,
            InstanceSpec::Weighted { path } => {
                let path = base_dir.join(path);
                WeightedDigraph::from_json(&read(&path)?).map_err(|source| BenchError::Json {
                    path: path.display().to_string(),
                    source,
                })?
            }
            InstanceSpec::Estimated { path } => {
                let path = base_dir.join(path);
                let problem = Problem::from_json(&read(&path)?)?;
                cells.push(Cell {
                    id: spec.name(),
                    problem,
                });
                continue;
            }
        };
        for &seed in &config.seeds {
            cells.push(Cell {
                id: format!("{}-s{seed}", spec.name()),
                problem: synth_estimators(&weighted, &SynthConfig::new(seed))?,
            });
        }
    }
    Ok(cells)
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn run_cell(
    cell: &Cell,
    algorithms: &[Algorithm],
    timeout: Duration,
    tau_v: f64,
) -> Result<CellOutcome, TimedOut> {
    let deadline = Some(Instant::now() + timeout);
    let problem = &cell.problem;
    let mut outcome = CellOutcome {
        runs: Vec::new(),
        ratios: Vec::new(),
        iterations: Vec::new(),
        disagreement: false,
    };

    let mut cache = EstimationCache::new(problem.graph()).with_tau_v(tau_v);
    let base = ei_ucs_until(problem, &mut cache, deadline)?;
    let base_final = base.metrics.final_layer_invocations;
    let base_exp = base.metrics.expansions;
    let base_row = RunRow::new(
        &cell.id,
        Algorithm::EiUcs,
        &base.metrics,
        base.l_under,
        base.l_over,
        base.opt,
        1,
    );

    for &alg in algorithms {
        let (row, final_layer) = match alg {
            Algorithm::EiUcs => (base_row.clone(), base_final),
            Algorithm::Beauty => {
                let mut cache = EstimationCache::new(problem.graph()).with_tau_v(tau_v);
                let r = beauty_until(problem, &mut cache, f64::INFINITY, f64::INFINITY, deadline)?;
                let row = RunRow::new(&cell.id, alg, &r.metrics, r.l_under, r.l_over, r.opt, 1);
                (row, r.metrics.final_layer_invocations)
            }
            Algorithm::ABeauty(max) => {
                let mut cache = EstimationCache::new(problem.graph()).with_tau_v(tau_v);
                let r = a_beauty_with(problem, &mut cache, AnytimeConfig::new(max), deadline)?;
                let last = r.log.last().expect("anytime runs at least once");
                for it in &r.log {
                    outcome.iterations.push(IterationRow {
                        instance_id: cell.id.clone(),
                        algorithm: alg,
                        iteration: it.iteration,
                        path: it
                            .path
                            .as_ref()
                            .map(|p| p.describe(problem.graph()))
                            .unwrap_or_default(),
                        l_under: it.l_under,
                        l_over: it.l_over,
                        l_est: it.l_est,
                        l_prune: it.l_prune,
                        forced: it.forced,
                        opt: it.opt,
                        expansions: it.metrics.expansions,
                        evaluations: it.metrics.evaluations,
                        prunings: it.metrics.prunings,
                        w_1: it.metrics.w(1),
                        w_2: it.metrics.w(2),
                        w_3: it.metrics.w(3),
                        t_w: it.metrics.estimation_time,
                    });
                }
                let row = RunRow::new(
                    &cell.id,
                    alg,
                    &r.metrics,
                    last.l_under,
                    r.l_star,
                    last.opt,
                    r.iterations(),
                );
                (row, r.metrics.final_layer_invocations)
            }
        };
        if row.l_over != base.l_over {
            outcome.disagreement = true;
        }
        outcome.ratios.push(RatioRow {
            instance_id: cell.id.clone(),
            algorithm: alg,
            final_layer,
            final_layer_eiucs: base_final,
            r_l3: ratio(final_layer, base_final),
            r_exp: ratio(row.expansions, base_exp),
            l_star: row.l_over,
        });
        outcome.runs.push(row);
    }
    if !algorithms.contains(&Algorithm::EiUcs) {
        outcome.runs.insert(0, base_row);
    }
    Ok(outcome)
}

fn summarize(config: &SuiteConfig, report: &mut SuiteReport) {
    for &alg in &config.algorithms {
        let rows: Vec<&RatioRow> = report
            .ratios
            .iter()
            .filter(|r| r.algorithm == alg)
            .collect();
        let r_l3: Vec<f64> = rows.iter().filter_map(|r| r.r_l3).collect();
        let r_exp: Vec<f64> = rows.iter().filter_map(|r| r.r_exp).collect();
        report.summaries.push(AlgorithmSummary {
            algorithm: alg,
            instances: rows.len(),
            r_l3: Stats::of(&r_l3),
            r_exp: Stats::of(&r_exp),
        });

        let Algorithm::ABeauty(max) = alg else {
            continue;
        };
        let l_star: BTreeMap<&str, f64> = rows
            .iter()
            .map(|r| (r.instance_id.as_str(), r.l_star))
            .collect();
        // one extra slot for the numerical fallback call
        let slots = max + 1;
        let mut convergence = vec![Vec::new(); slots];
        let mut pruning = vec![Vec::new(); slots];
        let mut last_iteration: BTreeMap<&str, usize> = BTreeMap::new();
        for it in report.iterations.iter().filter(|i| i.algorithm == alg) {
            let slot = it.iteration - 1;
            if let Some(&target) = l_star.get(it.instance_id.as_str()) {
                if target > 0.0 && target.is_finite() && it.l_under.is_finite() {
                    convergence[slot].push(it.l_under / target);
                }
            }
            if it.evaluations > 0 {
                pruning[slot].push(it.prunings as f64 / it.evaluations as f64);
            }
            let last = last_iteration.entry(it.instance_id.as_str()).or_default();
            *last = (*last).max(it.iteration);
        }
        let mut histogram = vec![0; slots];
        for &last in last_iteration.values() {
            histogram[last - 1] += 1;
        }
        while histogram.len() > max && histogram.last() == Some(&0) {
            histogram.pop();
            convergence.pop();
            pruning.pop();
        }
        report.anytime.push(AnytimeSummary {
            algorithm: alg,
            convergence: convergence.iter().map(|v| Stats::of(v)).collect(),
            pruning: pruning.iter().map(|v| Stats::of(v)).collect(),
            final_iteration_histogram: histogram,
        });
    }
}

/// Runs every (instance, seed, algorithm) combination. Relative file paths in
/// `config` resolve against `base_dir`.
pub fn run_suite(config: &SuiteConfig, base_dir: &FsPath) -> Result<SuiteReport, BenchError> {
    let cells = build_cells(config, base_dir)?;
    let timeout = Duration::from_secs_f64(config.timeout_seconds.max(0.0));
    let outcomes: Vec<(String, Result<CellOutcome, TimedOut>)> = cells
        .par_iter()
        .map(|cell| {
            (
                cell.id.clone(),
                run_cell(cell, &config.algorithms, timeout, config.tau_v),
            )
        })
        .collect();

    let mut report = SuiteReport::default();
    for (id, outcome) in outcomes {
        match outcome {
            Ok(o) => {
                if o.disagreement {
                    report.disagreements.push(id);
                }
                report.runs.extend(o.runs);
                report.ratios.extend(o.ratios);
                report.iterations.extend(o.iterations);
            }
            Err(TimedOut) => report.timeouts.push(id),
        }
    }
    summarize(config, &mut report);
    Ok(report)
}

fn write_csv<T: Serialize>(path: &FsPath, rows: &[T], header: &[&str]) -> Result<(), BenchError> {
    let io = |source| BenchError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut writer = csv::WriterBuilder::new()
        .has_headers(!rows.is_empty())
        .from_path(path)
        .map_err(|e| io(e.into()))?;
    if rows.is_empty() {
        writer.write_record(header).map_err(|e| io(e.into()))?;
    }
    for row in rows {
        writer.serialize(row).map_err(|e| io(e.into()))?;
    }
    writer.flush().map_err(io)
}

pub const RUN_COLUMNS: [&str; 14] = [
    "instance_id",
    "algorithm",
    "w_1",
    "w_2",
    "w_3",
    "expansions",
    "evaluations",
    "prunings",
    "T_w",
    "T_v",
    "l_under",
    "l_over",
    "optimal_flag",
    "iterations",
];

/// Writes run rows as a metrics CSV with the [`RUN_COLUMNS`] header.
pub fn write_runs(path: &FsPath, rows: &[RunRow]) -> Result<(), BenchError> {
    write_csv(path, rows, &RUN_COLUMNS)
}

/// Writes `runs.csv`, `ratios.csv`, `iterations.csv` and `summary.json` into
/// `out_dir`, creating it if needed.
pub fn write_report(report: &SuiteReport, out_dir: &FsPath) -> Result<(), BenchError> {
    fs::create_dir_all(out_dir).map_err(|source| BenchError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    write_csv(&out_dir.join("runs.csv"), &report.runs, &RUN_COLUMNS)?;
    write_csv(
        &out_dir.join("ratios.csv"),
        &report.ratios,
        &[
            "instance_id",
            "algorithm",
            "final_layer",
            "final_layer_eiucs",
            "r_l3",
            "r_exp",
            "l_star",
        ],
    )?;
    write_csv(
        &out_dir.join("iterations.csv"),
        &report.iterations,
        &[
            "instance_id",
            "algorithm",
            "iteration",
            "path",
            "l_under",
            "l_over",
            "l_est",
            "l_prune",
            "forced",
            "opt",
            "expansions",
            "evaluations",
            "prunings",
            "w_1",
            "w_2",
            "w_3",
            "T_w",
        ],
    )?;
    #[derive(Serialize)]
    struct Summary<'a> {
        summaries: &'a [AlgorithmSummary],
        anytime: &'a [AnytimeSummary],
        timeouts: &'a [String],
        disagreements: &'a [String],
    }
    let summary = Summary {
        summaries: &report.summaries,
        anytime: &report.anytime,
        timeouts: &report.timeouts,
        disagreements: &report.disagreements,
    };
    let path = out_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serialization is infallible");
    fs::write(&path, text).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names() {
        assert_eq!("eiucs".parse(), Ok(Algorithm::EiUcs));
        assert_eq!("beauty".parse(), Ok(Algorithm::Beauty));
        assert_eq!("abeauty-2".parse(), Ok(Algorithm::ABeauty(2)));
        assert_eq!("abeauty10".parse(), Ok(Algorithm::ABeauty(10)));
        assert_eq!("abeauty".parse(), Ok(Algorithm::ABeauty(10)));
        assert!("abeauty-0".parse::<Algorithm>().is_err());
        assert!("dijkstra".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::ABeauty(2).to_string(), "abeauty-2");
    }

    #[test]
    fn empty_suite_gives_empty_report() {
        let config = SuiteConfig {
            instances: vec![],
            seeds: vec![0],
            algorithms: vec![Algorithm::Beauty],
            timeout_seconds: 60.0,
            tau_v: 1.0,
        };
        let report = run_suite(&config, FsPath::new(".")).unwrap();
        assert!(report.runs.is_empty() && report.ratios.is_empty());
        assert_eq!(report.summaries.len(), 1);
        assert!(report.summaries[0].r_l3.is_none());
    }

    #[test]
    fn suite_json_parses() {
        let text = r#"{
            "instances": [
                {"kind": "random", "n": 20, "edge_prob": 0.2, "cost_min": 1, "cost_max": 20, "rng_seed": 1},
                {"kind": "grid", "rows": 4, "cols": 4, "cost_min": 1, "cost_max": 9, "rng_seed": 2}
            ],
            "seeds": [0, 1],
            "algorithms": ["eiucs", "beauty", "abeauty-2", "abeauty-10"],
            "timeout_seconds": 5
        }"#;
        let config = SuiteConfig::from_json(text).unwrap();
        assert_eq!(config.algorithms[3], Algorithm::ABeauty(10));
        let report = run_suite(&config, FsPath::new(".")).unwrap();
        assert_eq!(report.runs.len(), 2 * 2 * 4);
        assert!(report.timeouts.is_empty());
        assert!(report.disagreements.is_empty());
    }
}
