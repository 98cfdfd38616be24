//! Best-first search over tightest lower bounds.
//!
//! [`beauty`] is uniform-cost search in which an edge's estimators are applied
//! lazily, cheapest first, only while the successor's tentative key still beats
//! its best known key. `l_est` caps how far estimation is refined and `l_prune`
//! drops successors whose key exceeds it. When a goal is popped,
//! [`beauty_ps`] fully estimates the solution path and decides optimality.
//!
//! [`ei_ucs`] is the estimation-time-indifferent baseline: the same search
//! skeleton, but every encountered edge is fully estimated at once.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::TimedOut;
use crate::estimation::{EstimationCache, Metrics, Phase, RunView};
use crate::graph::{EdgeId, Path, Problem, VertexId};

/// Best known path to a vertex within one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeRecord {
    pub vertex: VertexId,
    pub g_l: f64,
    /// Predecessor vertex and the edge taken from it.
    pub parent: Option<(VertexId, EdgeId)>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// `None` when no goal is reachable within `l_prune`.
    pub path: Option<Path>,
    pub opt: bool,
    /// Lower bound on L*: the popped goal's key.
    pub l_under: f64,
    /// The solution path's fully estimated lower bound; at least L*.
    pub l_over: f64,
    /// Effort spent in this run only.
    pub metrics: Metrics,
    /// `(vertex, g_l)` for every live OPEN pop, in order.
    pub pops: Vec<(VertexId, f64)>,
}

impl SearchResult {
    fn unsolved(metrics: Metrics, pops: Vec<(VertexId, f64)>) -> Self {
        Self {
            path: None,
            opt: false,
            l_under: f64::INFINITY,
            l_over: f64::INFINITY,
            metrics,
            pops,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.path.is_some()
    }
}

/// Outcome of the post-search tightening pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostSearch {
    pub opt: bool,
    pub l_under: f64,
    pub l_over: f64,
}

#[derive(Clone, Copy, Debug)]
enum Mode {
    Lazy { l_est: f64, l_prune: f64 },
    FullEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Unseen,
    Open(u64),
    Closed,
}

#[derive(Clone, Copy, Debug)]
struct OpenEntry {
    key: f64,
    seq: u64,
    vertex: VertexId,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then(self.seq.cmp(&other.seq))
    }
}

/// Min-queue on `(g_l, insertion order)` with lazy removal of superseded
/// entries, so each vertex has at most one live entry.
struct OpenList {
    heap: BinaryHeap<Reverse<OpenEntry>>,
    next_seq: u64,
}

impl OpenList {
    fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            next_seq: 0,
        }
    }

    fn insert(&mut self, vertex: VertexId, key: f64) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(OpenEntry { key, seq, vertex }));
        seq
    }

    fn pop_live(&mut self, status: &[Status]) -> Option<OpenEntry> {
        while let Some(Reverse(entry)) = self.heap.pop() {
            if status[entry.vertex.0] == Status::Open(entry.seq) {
                return Some(entry);
            }
        }
        None
    }
}

/// Runs BEAUTY with thresholds `l_est` and `l_prune` (use `f64::INFINITY` to
/// disable either).
pub fn beauty(
    problem: &Problem,
    cache: &mut EstimationCache<'_>,
    l_est: f64,
    l_prune: f64,
) -> SearchResult {
    beauty_until(problem, cache, l_est, l_prune, None).expect("no deadline was set")
}

pub fn beauty_until(
    problem: &Problem,
    cache: &mut EstimationCache<'_>,
    l_est: f64,
    l_prune: f64,
    deadline: Option<Instant>,
) -> Result<SearchResult, TimedOut> {
    run(problem, cache, Mode::Lazy { l_est, l_prune }, deadline)
}

/// Estimation-time-indifferent UCS baseline.
pub fn ei_ucs(problem: &Problem, cache: &mut EstimationCache<'_>) -> SearchResult {
    ei_ucs_until(problem, cache, None).expect("no deadline was set")
}

pub fn ei_ucs_until(
    problem: &Problem,
    cache: &mut EstimationCache<'_>,
    deadline: Option<Instant>,
) -> Result<SearchResult, TimedOut> {
    run(problem, cache, Mode::FullEstimate, deadline)
}

fn run(
    problem: &Problem,
    cache: &mut EstimationCache<'_>,
    mode: Mode,
    deadline: Option<Instant>,
) -> Result<SearchResult, TimedOut> {
    let graph = problem.graph();
    debug_assert!(
        std::ptr::eq(graph, cache.graph()),
        "cache belongs to another graph"
    );
    let n = graph.vertex_count();
    let before = cache.snapshot_metrics();
    cache.set_phase(Phase::Search);

    let mut records: Vec<NodeRecord> = (0..n)
        .map(|v| NodeRecord {
            vertex: VertexId(v),
            g_l: f64::INFINITY,
            parent: None,
        })
        .collect();
    let mut status = vec![Status::Unseen; n];
    let mut open = OpenList::new();
    let mut pops = Vec::new();

    let start = problem.start();
    records[start.0].g_l = 0.0;
    status[start.0] = Status::Open(open.insert(start, 0.0));

    let mut view = RunView::new(cache);
    while let Some(entry) = open.pop_live(&status) {
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(TimedOut);
        }
        let node = entry.vertex;
        let g_n = records[node.0].g_l;
        pops.push((node, g_n));

        if problem.is_goal(node) {
            let path = trace(&records, node);
            let cache = view.cache();
            cache.set_phase(Phase::PostSearch);
            let ps = beauty_ps(&path, g_n, cache);
            cache.set_phase(Phase::Search);
            return Ok(SearchResult {
                path: Some(path),
                opt: ps.opt,
                l_under: ps.l_under,
                l_over: ps.l_over,
                metrics: cache.snapshot_metrics().since(&before),
                pops,
            });
        }

        status[node.0] = Status::Closed;
        view.cache().record_expansion();

        for &e in graph.outgoing(node) {
            let succ = graph.edge(e).to;
            view.cache().record_evaluation();
            let g_s = records[succ.0].g_l;
            let mut g_tilde = g_n;
            let l_prune = match mode {
                Mode::Lazy { l_est, l_prune } => {
                    while g_tilde < g_s && view.has_remaining(e) {
                        let l = view.apply_next(e).expect("remaining estimator checked");
                        g_tilde = g_n + l;
                        if g_tilde > l_est {
                            break;
                        }
                    }
                    l_prune
                }
                Mode::FullEstimate => {
                    while view.has_remaining(e) {
                        let l = view.apply_next(e).expect("remaining estimator checked");
                        g_tilde = g_n + l;
                    }
                    f64::INFINITY
                }
            };
            if g_tilde < g_s {
                if g_tilde <= l_prune {
                    debug_assert!(status[succ.0] != Status::Closed, "closed vertex reopened");
                    records[succ.0].g_l = g_tilde;
                    records[succ.0].parent = Some((node, e));
                    status[succ.0] = Status::Open(open.insert(succ, g_tilde));
                } else {
                    view.cache().record_pruning();
                }
            }
        }
    }

    let metrics = view.cache().snapshot_metrics().since(&before);
    Ok(SearchResult::unsolved(metrics, pops))
}

/// Fully estimates the edges of `path` that still have estimators left and
/// reports whether the path's lower bound `l_pi` was already tight.
pub fn beauty_ps(path: &Path, l_pi: f64, cache: &mut EstimationCache<'_>) -> PostSearch {
    let mut l_path = l_pi;
    for &e in &path.edges {
        if cache.has_remaining(e) {
            let old = cache.state(e).tightest_lower;
            let new = cache.apply_final(e).expect("remaining estimator checked");
            l_path += new - old;
        }
    }
    PostSearch {
        opt: l_path <= l_pi,
        l_under: l_pi,
        l_over: l_path,
    }
}

/// Rebuilds the path to `vertex` by following parent links.
pub fn trace(records: &[NodeRecord], vertex: VertexId) -> Path {
    let mut edges = Vec::new();
    let mut at = vertex;
    while let Some((prev, e)) = records[at.0].parent {
        edges.push(e);
        at = prev;
    }
    edges.reverse();
    Path {
        edges,
        terminal: vertex,
    }
}
