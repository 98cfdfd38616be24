//! Anytime search: repeated BEAUTY calls whose thresholds close in on L*.
//!
//! Each call uses the previous call's lower bound as `l_est` and the best
//! upper estimate so far as `l_prune`. Estimates persist in one shared
//! cache, so no estimator runs twice. A call budget and an optional
//! convergence ratio trigger a final call with both thresholds at the upper
//! estimate, which is guaranteed to return an optimal path.

use std::time::Instant;

use crate::error::TimedOut;
use crate::estimation::{EstimationCache, Metrics};
use crate::graph::{Path, Problem};
use crate::search::beauty_until;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnytimeConfig {
    /// BEAUTY calls allowed, including a forced final one. At least 1.
    pub max_iterations: usize,
    /// Force the final call once `l_over / l_under <= 1 + epsilon`.
    pub epsilon: Option<f64>,
}

impl AnytimeConfig {
    pub fn new(max_iterations: usize) -> Self {
        assert!(max_iterations >= 1, "max_iterations must be at least 1");
        Self {
            max_iterations,
            epsilon: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
}

/// Progress after one BEAUTY call.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    /// 1-based.
    pub iteration: usize,
    pub path: Option<Path>,
    pub l_under: f64,
    /// Best upper estimate after this call.
    pub l_over: f64,
    pub opt: bool,
    pub l_est: f64,
    pub l_prune: f64,
    /// The thresholds were forced to the upper estimate.
    pub forced: bool,
    /// Effort spent in this call only.
    pub metrics: Metrics,
}

#[derive(Clone, Debug)]
pub struct AnytimeResult {
    pub path: Option<Path>,
    /// L* when solved, `f64::INFINITY` otherwise.
    pub l_star: f64,
    pub log: Vec<IterationRecord>,
    /// Effort over the whole run.
    pub metrics: Metrics,
}

impl AnytimeResult {
    pub fn iterations(&self) -> usize {
        self.log.len()
    }
}

/// A-BEAUTY with a call budget of `max_iterations` on a fresh cache.
pub fn a_beauty(problem: &Problem, max_iterations: usize) -> AnytimeResult {
    let mut cache = EstimationCache::new(problem.graph());
    a_beauty_with(
        problem,
        &mut cache,
        AnytimeConfig::new(max_iterations),
        None,
    )
    .expect("no deadline was set")
}

pub fn a_beauty_with(
    problem: &Problem,
    cache: &mut EstimationCache<'_>,
    config: AnytimeConfig,
    deadline: Option<Instant>,
) -> Result<AnytimeResult, TimedOut> {
    assert!(
        config.max_iterations >= 1,
        "max_iterations must be at least 1"
    );
    let start = cache.snapshot_metrics();
    let mut l_under = 0.0;
    let mut l_over = f64::INFINITY;
    let mut force = false;
    let mut log = Vec::new();

    for iteration in 1..=config.max_iterations {
        let forced = force || iteration == config.max_iterations;
        let (l_est, l_prune) = if forced {
            (l_over, l_over)
        } else {
            (l_under, l_over)
        };
        cache.begin_run(iteration);
        let result = beauty_until(problem, cache, l_est, l_prune, deadline)?;
        let Some(path) = result.path else {
            log.push(IterationRecord {
                iteration,
                path: None,
                l_under: f64::INFINITY,
                l_over: f64::INFINITY,
                opt: false,
                l_est,
                l_prune,
                forced,
                metrics: result.metrics,
            });
            return Ok(AnytimeResult {
                path: None,
                l_star: f64::INFINITY,
                log,
                metrics: cache.snapshot_metrics().since(&start),
            });
        };
        l_over = l_over.min(result.l_over);
        l_under = result.l_under;
        log.push(IterationRecord {
            iteration,
            path: Some(path.clone()),
            l_under,
            l_over,
            opt: result.opt,
            l_est,
            l_prune,
            forced,
            metrics: result.metrics,
        });
        if result.opt {
            return Ok(AnytimeResult {
                path: Some(path),
                l_star: l_over,
                log,
                metrics: cache.snapshot_metrics().since(&start),
            });
        }
        if let Some(eps) = config.epsilon {
            if l_over <= l_under * (1.0 + eps) {
                force = true;
            }
        }
    }

    // A forced call has l_est = l_prune >= L*, which returns opt in exact
    // arithmetic. Rounding in non-integer sums can still prune the optimal
    // path at the threshold, so fall back to an unbounded call.
    let iteration = config.max_iterations + 1;
    cache.begin_run(iteration);
    let result = beauty_until(problem, cache, f64::INFINITY, f64::INFINITY, deadline)?;
    let path = result.path.clone();
    l_over = l_over.min(result.l_over);
    log.push(IterationRecord {
        iteration,
        path: result.path,
        l_under: result.l_under,
        l_over,
        opt: result.opt,
        l_est: f64::INFINITY,
        l_prune: f64::INFINITY,
        forced: true,
        metrics: result.metrics,
    });
    Ok(AnytimeResult {
        path,
        l_star: l_over,
        log,
        metrics: cache.snapshot_metrics().since(&start),
    })
}
