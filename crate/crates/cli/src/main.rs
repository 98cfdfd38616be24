//! `slb`: solve estimated-digraph instances, synthesize and generate
//! benchmark graphs, and run experiment suites.
//!
//! Exit codes: 0 success, 2 unreachable goal, 3 invalid input, 4 timeout.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use slb::bench::{
    gen_grid_graph, gen_random_graph, run_suite, synth_estimators, write_report, write_runs,
    Algorithm, RunRow, SuiteConfig, SynthConfig, WeightedDigraph,
};
use slb::search::ei_ucs;
use slb::{a_beauty_with, beauty, validate_graph, AnytimeConfig, EstimationCache, Problem};

const EXIT_UNREACHABLE: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "slb",
    version,
    about = "Shortest-path tightest lower bounds over estimated digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one estimated graph and print the result as JSON.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        alg: Alg,
        /// Estimation threshold for beauty (`inf` allowed).
        #[arg(long, default_value = "inf", value_parser = threshold)]
        l_est: f64,
        /// Pruning threshold for beauty (`inf` allowed).
        #[arg(long, default_value = "inf", value_parser = threshold)]
        l_prune: f64,
        /// Call budget for abeauty.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        max_iters: u64,
        /// Convergence ratio that forces abeauty's final call.
        #[arg(long, value_parser = threshold)]
        epsilon: Option<f64>,
        /// Write a one-row metrics CSV here.
        #[arg(long)]
        metrics_out: Option<PathBuf>,
    },
    /// Attach synthesized estimators to a weighted graph.
    Synth {
        #[arg(long)]
        weighted_graph: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a weighted graph.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        /// Vertex count (random model).
        #[arg(long)]
        n: Option<usize>,
        /// Arc probability (random model).
        #[arg(long, default_value_t = 0.05)]
        edge_prob: f64,
        /// Grid rows (grid model).
        #[arg(long)]
        rows: Option<usize>,
        /// Grid columns (grid model).
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 1)]
        cost_min: i64,
        #[arg(long, default_value_t = 20)]
        cost_max: i64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment suite and write CSV and JSON reports.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Eiucs,
    Beauty,
    Abeauty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Random,
    Grid,
}

fn threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_nan() || v < 0.0 {
        return Err(format!("expected a non-negative number or inf, got {s:?}"));
    }
    Ok(v)
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(error: anyhow::Error) -> Failure {
    Failure {
        code: EXIT_INVALID,
        error,
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|error| Failure { code: 1, error })
}

fn load_problem(path: &FsPath) -> Result<Problem, Failure> {
    let problem = Problem::from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(invalid)?;
    let violations = validate_graph(problem.graph());
    if !violations.is_empty() {
        let listed: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(invalid(anyhow!(
            "invalid graph {}: {}",
            path.display(),
            listed.join("; ")
        )));
    }
    Ok(problem)
}

fn solve(
    graph: &FsPath,
    alg: Alg,
    l_est: f64,
    l_prune: f64,
    max_iters: usize,
    epsilon: Option<f64>,
    metrics_out: Option<&FsPath>,
) -> Result<u8, Failure> {
    let problem = load_problem(graph)?;
    let mut cache = EstimationCache::new(problem.graph());
    let (algorithm, path, l_under, l_over, opt, iterations, metrics) = match alg {
        Alg::Eiucs => {
            let r = ei_ucs(&problem, &mut cache);
            (
                Algorithm::EiUcs,
                r.path,
                r.l_under,
                r.l_over,
                r.opt,
                1,
                r.metrics,
            )
        }
        Alg::Beauty => {
            let r = beauty(&problem, &mut cache, l_est, l_prune);
            (
                Algorithm::Beauty,
                r.path,
                r.l_under,
                r.l_over,
                r.opt,
                1,
                r.metrics,
            )
        }
        Alg::Abeauty => {
            let mut config = AnytimeConfig::new(max_iters);
            config.epsilon = epsilon;
            let r = a_beauty_with(&problem, &mut cache, config, None).expect("no deadline was set");
            let last = r.log.last().expect("anytime runs at least once");
            let iterations = r.iterations();
            (
                Algorithm::ABeauty(max_iters),
                r.path,
                last.l_under,
                r.l_star,
                last.opt,
                iterations,
                r.metrics,
            )
        }
    };

    if let Some(out) = metrics_out {
        let id = graph.display().to_string();
        let row = RunRow::new(&id, algorithm, &metrics, l_under, l_over, opt, iterations);
        write_runs(out, &[row])
            .with_context(|| format!("writing {}", out.display()))
            .map_err(|error| Failure { code: 1, error })?;
    }

    let Some(path) = path else {
        return Err(Failure {
            code: EXIT_UNREACHABLE,
            error: anyhow!("no goal is reachable from the start vertex"),
        });
    };
    let vertices: Vec<usize> = std::iter::once(problem.start().0)
        .chain(path.edges.iter().map(|&e| problem.graph().edge(e).to.0))
        .collect();
    let report = json!({
        "algorithm": algorithm.to_string(),
        "path": path.edges.iter().map(|e| e.0).collect::<Vec<_>>(),
        "vertices": vertices,
        "l_under": l_under,
        "l_over": l_over,
        "optimal": opt,
        "iterations": iterations,
        "expansions": metrics.expansions,
        "evaluations": metrics.evaluations,
        "prunings": metrics.prunings,
        "invocations": (1..=problem.graph().max_layers()).map(|l| metrics.w(l)).collect::<Vec<_>>(),
        "T_w": metrics.estimation_time,
        "T_v": metrics.search_time(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialization is infallible")
    );
    Ok(0)
}

fn synth(weighted_graph: &FsPath, seed: u64, out: &FsPath) -> Result<u8, Failure> {
    let weighted = WeightedDigraph::from_json(&read(weighted_graph)?)
        .with_context(|| format!("parsing {}", weighted_graph.display()))
        .map_err(invalid)?;
    let problem =
        synth_estimators(&weighted, &SynthConfig::new(seed)).map_err(|e| invalid(e.into()))?;
    write(out, &problem.to_json())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn generate(
    model: Model,
    n: Option<usize>,
    edge_prob: f64,
    rows: Option<usize>,
    cols: Option<usize>,
    costs: (i64, i64),
    rng_seed: u64,
    out: &FsPath,
) -> Result<u8, Failure> {
    let graph = match model {
        Model::Random => {
            let n = n.ok_or_else(|| invalid(anyhow!("--n is required for the random model")))?;
            gen_random_graph(n, edge_prob, costs, rng_seed)
        }
        Model::Grid => {
            let rows =
                rows.ok_or_else(|| invalid(anyhow!("--rows is required for the grid model")))?;
            let cols =
                cols.ok_or_else(|| invalid(anyhow!("--cols is required for the grid model")))?;
            gen_grid_graph(rows, cols, costs, rng_seed)
        }
    }
    .map_err(|e| invalid(e.into()))?;
    write(out, &graph.to_json())?;
    Ok(0)
}

fn bench(suite: &FsPath, out_dir: &FsPath) -> Result<u8, Failure> {
    let config = SuiteConfig::from_json(&read(suite)?)
        .with_context(|| format!("parsing {}", suite.display()))
        .map_err(invalid)?;
    let base = suite.parent().unwrap_or(FsPath::new("."));
    let report = run_suite(&config, base).map_err(|e| invalid(e.into()))?;
    write_report(&report, out_dir).map_err(|e| Failure {
        code: 1,
        error: e.into(),
    })?;
    for id in &report.disagreements {
        eprintln!("warning: algorithms disagree on L* for {id}");
    }
    if report.timeouts.is_empty() {
        Ok(0)
    } else {
        eprintln!("timed out: {}", report.timeouts.join(", "));
        Ok(EXIT_TIMEOUT)
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            graph,
            alg,
            l_est,
            l_prune,
            max_iters,
            epsilon,
            metrics_out,
        } => solve(
            &graph,
            alg,
            l_est,
            l_prune,
            max_iters as usize,
            epsilon,
            metrics_out.as_deref(),
        ),
        Command::Synth {
            weighted_graph,
            seed,
            out,
        } => synth(&weighted_graph, seed, &out),
        Command::Gen {
            model,
            n,
            edge_prob,
            rows,
            cols,
            cost_min,
            cost_max,
            rng_seed,
            out,
        } => generate(
            model,
            n,
            edge_prob,
            rows,
            cols,
            (cost_min, cost_max),
            rng_seed,
            &out,
        ),
        Command::Bench { suite, out_dir } => bench(&suite, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
