//! Instance synthesis, graph generators and the experiment driver.

mod generate;
mod stats;
mod suite;
mod synth;

pub use generate::{gen_grid_graph, gen_random_graph, WeightedDigraph, WeightedEdge};
pub use stats::Stats;
pub use suite::{
    run_suite, write_report, write_runs, Algorithm, AlgorithmSummary, AnytimeSummary, InstanceSpec,
    IterationRow, RatioRow, RunRow, SuiteConfig, SuiteReport, RUN_COLUMNS,
};
pub use synth::{hash_column, synth_estimators, SynthConfig, DEFAULT_TABLE, DEFAULT_TIME_COSTS};
