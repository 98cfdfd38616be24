//! Lazy, cached application of edge estimators with cost accounting.
//!
//! [`EstimationCache`] is the only place where estimators are "invoked". Each
//! (edge, layer) pair is invoked at most once over the cache's lifetime, and
//! every invocation is charged its `time_cost` in the simulated estimation
//! time. [`RunView`] gives one search run its own cursor over the shared
//! cache, so a later run first reads what earlier runs already paid for.

use std::time::Duration;

use serde::Serialize;

use crate::error::EstimationError;
use crate::graph::{EdgeBoundState, EdgeId, EstimatedDigraph};

/// Which part of a search run caused an invocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    Search,
    PostSearch,
}

/// One estimator invocation. `layer` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Invocation {
    pub edge: EdgeId,
    pub layer: usize,
    pub phase: Phase,
    pub run: usize,
}

/// Estimation and search effort counters.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    /// `invocations[i]` counts layer `i + 1` invocations (w_1, w_2, ...).
    pub invocations: Vec<u64>,
    /// Invocations of an edge's own last estimator, whatever its layer.
    pub final_layer_invocations: u64,
    /// Layers jumped over by `apply_final` and never invoked.
    pub skipped_layers: u64,
    pub expansions: u64,
    pub evaluations: u64,
    pub prunings: u64,
    /// Simulated estimation time T_w.
    pub estimation_time: f64,
    /// Simulated cost of one expansion, τ_v.
    pub tau_v: f64,
}

impl Default for Metrics {
    fn default() -> Self {
        Self {
            invocations: Vec::new(),
            final_layer_invocations: 0,
            skipped_layers: 0,
            expansions: 0,
            evaluations: 0,
            prunings: 0,
            estimation_time: 0.0,
            tau_v: 1.0,
        }
    }
}

impl Metrics {
    /// w_layer for a 1-based layer; zero past the deepest layer seen.
    pub fn w(&self, layer: usize) -> u64 {
        layer
            .checked_sub(1)
            .and_then(|i| self.invocations.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_invocations(&self) -> u64 {
        self.invocations.iter().sum()
    }

    /// Simulated search time T_v = τ_v × expansions.
    pub fn search_time(&self) -> f64 {
        self.tau_v * self.expansions as f64
    }

    /// T = T_w + T_v.
    pub fn total_time(&self) -> f64 {
        self.estimation_time + self.search_time()
    }

    /// Counters accumulated since `earlier` was taken from the same source.
    pub fn since(&self, earlier: &Metrics) -> Metrics {
        let layers = self.invocations.len().max(earlier.invocations.len());
        Metrics {
            invocations: (1..=layers).map(|l| self.w(l) - earlier.w(l)).collect(),
            final_layer_invocations: self.final_layer_invocations - earlier.final_layer_invocations,
            skipped_layers: self.skipped_layers - earlier.skipped_layers,
            expansions: self.expansions - earlier.expansions,
            evaluations: self.evaluations - earlier.evaluations,
            prunings: self.prunings - earlier.prunings,
            estimation_time: self.estimation_time - earlier.estimation_time,
            tau_v: self.tau_v,
        }
    }

    /// Sum of two counter sets, e.g. per-iteration deltas.
    pub fn plus(&self, other: &Metrics) -> Metrics {
        let layers = self.invocations.len().max(other.invocations.len());
        Metrics {
            invocations: (1..=layers).map(|l| self.w(l) + other.w(l)).collect(),
            final_layer_invocations: self.final_layer_invocations + other.final_layer_invocations,
            skipped_layers: self.skipped_layers + other.skipped_layers,
            expansions: self.expansions + other.expansions,
            evaluations: self.evaluations + other.evaluations,
            prunings: self.prunings + other.prunings,
            estimation_time: self.estimation_time + other.estimation_time,
            tau_v: self.tau_v,
        }
    }
}

/// Per-edge bound states plus accounting, persistent across search runs on
/// the same graph.
#[derive(Clone, Debug)]
pub struct EstimationCache<'g> {
    graph: &'g EstimatedDigraph,
    states: Vec<EdgeBoundState>,
    metrics: Metrics,
    log: Vec<Invocation>,
    phase: Phase,
    run: usize,
    wall_clock: bool,
}

impl<'g> EstimationCache<'g> {
    pub fn new(graph: &'g EstimatedDigraph) -> Self {
        Self {
            graph,
            states: vec![EdgeBoundState::unestimated(); graph.edge_count()],
            metrics: Metrics {
                invocations: vec![0; graph.max_layers()],
                ..Metrics::default()
            },
            log: Vec::new(),
            phase: Phase::Search,
            run: 0,
            wall_clock: false,
        }
    }

    pub fn with_tau_v(mut self, tau_v: f64) -> Self {
        self.metrics.tau_v = tau_v;
        self
    }

    /// Sleep for each invoked estimator's `time_cost` seconds, for end-to-end
    /// timing demos.
    pub fn with_wall_clock(mut self, enabled: bool) -> Self {
        self.wall_clock = enabled;
        self
    }

    pub fn graph(&self) -> &'g EstimatedDigraph {
        self.graph
    }

    pub fn state(&self, edge: EdgeId) -> &EdgeBoundState {
        &self.states[edge.0]
    }

    pub fn states(&self) -> &[EdgeBoundState] {
        &self.states
    }

    pub fn has_remaining(&self, edge: EdgeId) -> bool {
        self.states[edge.0].next_index < self.graph.edge(edge).layers()
    }

    /// Invokes the next unapplied estimator and returns the new tightest lower
    /// bound together with the 1-based layer that ran.
    pub fn apply_next(&mut self, edge: EdgeId) -> Result<(f64, usize), EstimationError> {
        if !self.has_remaining(edge) {
            return Err(EstimationError::Exhausted(edge));
        }
        let layer = self.states[edge.0].next_index;
        self.invoke(edge, layer);
        self.states[edge.0].next_index = layer + 1;
        Ok((self.states[edge.0].tightest_lower, layer + 1))
    }

    /// Invokes only the edge's last estimator, skipping any layers in between,
    /// and marks the edge fully estimated.
    pub fn apply_final(&mut self, edge: EdgeId) -> Result<f64, EstimationError> {
        if !self.has_remaining(edge) {
            return Err(EstimationError::Exhausted(edge));
        }
        let last = self.graph.edge(edge).layers() - 1;
        let state = &mut self.states[edge.0];
        self.metrics.skipped_layers += (last - state.next_index) as u64;
        self.invoke(edge, last);
        self.states[edge.0].next_index = last + 1;
        Ok(self.states[edge.0].tightest_lower)
    }

    fn invoke(&mut self, edge: EdgeId, layer: usize) {
        let e = self.graph.edge(edge);
        let spec = &e.estimators[layer];
        self.states[edge.0].fold(spec);
        self.metrics.invocations[layer] += 1;
        if layer + 1 == e.layers() {
            self.metrics.final_layer_invocations += 1;
        }
        self.metrics.estimation_time += spec.time_cost();
        self.log.push(Invocation {
            edge,
            layer: layer + 1,
            phase: self.phase,
            run: self.run,
        });
        if self.wall_clock {
            std::thread::sleep(Duration::from_secs_f64(spec.time_cost()));
        }
    }

    pub fn snapshot_metrics(&self) -> Metrics {
        self.metrics.clone()
    }

    /// Every invocation so far, in order.
    pub fn invocations(&self) -> &[Invocation] {
        &self.log
    }

    /// Labels subsequent invocations with a new run number.
    pub fn begin_run(&mut self, run: usize) {
        self.run = run;
        self.phase = Phase::Search;
    }

    pub fn current_run(&self) -> usize {
        self.run
    }

    pub(crate) fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub(crate) fn record_expansion(&mut self) {
        self.metrics.expansions += 1;
    }

    pub(crate) fn record_evaluation(&mut self) {
        self.metrics.evaluations += 1;
    }

    pub(crate) fn record_pruning(&mut self) {
        self.metrics.prunings += 1;
    }
}

/// One search run's cursor over a shared cache.
///
/// The first application on an edge within a run returns everything the cache
/// already knows about it at no charge; further applications invoke fresh
/// estimators through the cache.
pub struct RunView<'c, 'g> {
    cache: &'c mut EstimationCache<'g>,
    consumed: Vec<usize>,
}

impl<'c, 'g> RunView<'c, 'g> {
    pub fn new(cache: &'c mut EstimationCache<'g>) -> Self {
        let consumed = vec![0; cache.graph.edge_count()];
        Self { cache, consumed }
    }

    pub fn has_remaining(&self, edge: EdgeId) -> bool {
        self.consumed[edge.0] < self.cache.graph.edge(edge).layers()
    }

    /// Next lower bound for `edge` in this run.
    pub fn apply_next(&mut self, edge: EdgeId) -> Result<f64, EstimationError> {
        if !self.has_remaining(edge) {
            return Err(EstimationError::Exhausted(edge));
        }
        let known = self.cache.states[edge.0].next_index;
        if known <= self.consumed[edge.0] {
            self.cache.apply_next(edge)?;
        }
        self.consumed[edge.0] = self.cache.states[edge.0].next_index;
        Ok(self.cache.states[edge.0].tightest_lower)
    }

    pub fn cache(&mut self) -> &mut EstimationCache<'g> {
        self.cache
    }
}
