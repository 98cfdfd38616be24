//! Exit criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p slb-core --test acceptance -- --nocapture --test-threads 1`
//! to see them in order.

mod common;

use std::collections::HashMap;
use std::path::Path as FsPath;
use std::time::Instant;

use slb::bench::{
    gen_grid_graph, run_suite, synth_estimators, Algorithm, InstanceSpec, SuiteConfig, SynthConfig,
};
use slb::fixtures::{example1, E01, E02, E14, E21, E23, E24};
use slb::oracle::{oracle_cstar, oracle_enumerate, oracle_lstar};
use slb::search::ei_ucs;
use slb::{
    a_beauty, admissibility_factor, beauty, validate_graph, AnytimeResult, EstimationCache, Phase,
    Problem,
};

fn verdict(id: u32, title: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {title} -- {detail}");
    assert!(ok, "criterion {id} failed: {detail}");
}

fn edge_names(p: &Problem, edges: &[slb::EdgeId]) -> String {
    edges
        .iter()
        .map(|&e| {
            let edge = p.graph().edge(e);
            format!("e{}{}", edge.from.0, edge.to.0)
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn c01_example_golden_values() {
    let p = example1();
    let t = Instant::now();
    let l_star = oracle_lstar(&p);
    let c_star = oracle_cstar(&p).unwrap();
    let b = admissibility_factor(13.0, l_star).unwrap();
    let elapsed = t.elapsed();
    let ok = l_star == 7.0
        && c_star == 9.0
        && (b - 13.0 / 7.0).abs() <= 1e-12
        && elapsed.as_secs_f64() < 1e-3;
    verdict(
        1,
        "worked example golden values",
        ok,
        &format!("L*={l_star} C*={c_star} B(pi2)={b:.15} (13/7), {elapsed:?}"),
    );
}

#[test]
fn c02_base_setting_golden_trace() {
    let p = example1();
    let mut cache = EstimationCache::new(p.graph());
    let r = beauty(&p, &mut cache, f64::INFINITY, f64::INFINITY);
    let invoked: Vec<_> = cache
        .invocations()
        .iter()
        .map(|i| (i.edge, i.layer))
        .collect();
    let expected = vec![
        (E01, 1),
        (E02, 1),
        (E02, 2),
        (E21, 1),
        (E23, 1),
        (E23, 2),
        (E24, 1),
        (E14, 1),
        (E14, 2),
    ];
    let path = r.path.as_ref().map(|x| x.edges.clone()).unwrap_or_default();
    let ok = path == vec![E02, E24]
        && (r.opt, r.l_under, r.l_over) == (true, 7.0, 7.0)
        && invoked == expected
        && !invoked.contains(&(E21, 2));
    verdict(
        2,
        "BEAUTY(inf, inf) golden trace",
        ok,
        &format!(
            "<{}>, {}, {}, {}; {} estimators invoked, e21 layer 2 never",
            edge_names(&p, &path),
            r.opt,
            r.l_under,
            r.l_over,
            invoked.len()
        ),
    );
}

#[test]
fn c03_anytime_golden_trace() {
    let p = example1();
    let mut cache = EstimationCache::new(p.graph());
    let r = slb::a_beauty_with(&p, &mut cache, slb::AnytimeConfig::new(10), None).unwrap();
    let log: Vec<_> = r
        .log
        .iter()
        .map(|it| {
            (
                it.path.as_ref().unwrap().edges.clone(),
                it.l_under,
                it.l_over,
            )
        })
        .collect();
    let post_search: Vec<_> = cache
        .invocations()
        .iter()
        .filter(|i| i.phase == Phase::PostSearch)
        .map(|i| (i.run, i.edge, i.layer))
        .collect();
    let ok = log == vec![(vec![E01, E14], 5.0, 8.0), (vec![E02, E24], 7.0, 7.0)]
        && r.path.as_ref().unwrap().edges == vec![E02, E24]
        && r.l_star == 7.0
        && post_search == vec![(1, E14, 2)];
    let shown: Vec<String> = log
        .iter()
        .map(|(e, lo, hi)| format!("<{}>, {lo}, {hi}", edge_names(&p, e)))
        .collect();
    verdict(
        3,
        "A-BEAUTY golden trace",
        ok,
        &format!(
            "iterations [{}]; returns {}; post-search invocations {:?}",
            shown.join(" | "),
            r.l_star,
            post_search
        ),
    );
}

fn corpus() -> (Vec<Problem>, Vec<Problem>) {
    let small = (0..1000).map(common::small).collect();
    let large = (0..100).map(|s| common::large(10_000 + s)).collect();
    (small, large)
}

#[test]
fn c04_oracle_equivalence() {
    let t = Instant::now();
    let (small, large) = corpus();
    let mut mismatches = Vec::new();
    let mut enumerated = 0;
    for (i, p) in small.iter().chain(large.iter()).enumerate() {
        let l_star = oracle_lstar(p);
        let mut cache = EstimationCache::new(p.graph());
        let base = beauty(p, &mut cache, f64::INFINITY, f64::INFINITY).l_over;
        let any10 = a_beauty(p, 10).l_star;
        let any2 = a_beauty(p, 2).l_star;
        let enumerated_ok = if i < small.len() {
            enumerated += 1;
            oracle_enumerate(p, 200).unwrap() == l_star
        } else {
            true
        };
        if !(base == l_star && any10 == l_star && any2 == l_star && enumerated_ok) {
            mismatches.push(i);
        }
    }
    let elapsed = t.elapsed();
    let ok = mismatches.is_empty() && elapsed.as_secs_f64() < 60.0;
    verdict(
        4,
        "oracle equivalence",
        ok,
        &format!(
            "{} small + {} large instances, {enumerated} enumeration-checked, {} mismatches, {elapsed:?}",
            small.len(),
            large.len(),
            mismatches.len()
        ),
    );
}

#[test]
fn c05_baseline_equivalence() {
    let (small, large) = corpus();
    let mut violations = 0;
    let mut instances = 0;
    for p in small.iter().chain(large.iter()) {
        instances += 1;
        let mut c1 = EstimationCache::new(p.graph());
        let mut c2 = EstimationCache::new(p.graph());
        let lazy = beauty(p, &mut c1, f64::INFINITY, f64::INFINITY);
        let full = ei_ucs(p, &mut c2);
        let layers = p.graph().max_layers();
        let dominated = (1..=layers).all(|l| lazy.metrics.w(l) <= full.metrics.w(l));
        if lazy.pops != full.pops
            || lazy.metrics.expansions != full.metrics.expansions
            || !dominated
        {
            violations += 1;
        }
    }
    verdict(
        5,
        "baseline equivalence (r_exp = 1, w_i dominated)",
        violations == 0,
        &format!("{instances} instances, {violations} violations"),
    );
}

#[test]
fn c06_bound_and_progress_properties() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut seed = 20_000;
    while checked < 500 {
        let p = common::small(seed);
        seed += 1;
        let l_star = oracle_lstar(&p);
        if !l_star.is_finite() {
            continue;
        }
        for _ in 0..4 {
            let l_est = match rng.gen_range(0..5) {
                0 => 0.0,
                1 => rng.gen_range(0.0..=l_star),
                2 => l_star,
                3 => l_star + rng.gen_range(0.0..20.0),
                _ => f64::INFINITY,
            };
            let l_prune = match rng.gen_range(0..3) {
                0 => l_star,
                1 => l_star + rng.gen_range(0.0..20.0),
                _ => f64::INFINITY,
            };
            let mut cache = EstimationCache::new(p.graph());
            let r = beauty(&p, &mut cache, l_est, l_prune);
            let sandwich =
                r.is_solved() && 0.0 <= r.l_under && r.l_under <= l_star && l_star <= r.l_over;
            let progress = l_est >= l_star || r.l_under > l_est;
            let optimal = l_est < l_star || (r.opt && r.l_over == l_star);
            if !(sandwich && progress && optimal) {
                violations.push((seed - 1, l_est, l_prune));
            }
        }
        checked += 1;
    }
    verdict(
        6,
        "bracket, progress and conditional optimality",
        violations.is_empty(),
        &format!(
            "{checked} instances x 4 threshold pairs, {} violations {:?}",
            violations.len(),
            violations
        ),
    );
}

fn invocations_once(cache: &EstimationCache<'_>) -> bool {
    let mut seen = HashMap::new();
    for inv in cache.invocations() {
        *seen.entry((inv.edge, inv.layer)).or_insert(0u32) += 1;
    }
    seen.values().all(|&c| c <= 1)
}

#[test]
fn c07_anytime_monotonicity_and_caching() {
    let mut strict = Vec::new();
    let mut upper = 0;
    let mut cached = 0;
    let mut two = 0;
    for seed in 0..500 {
        let p = common::small(30_000 + seed);
        let l_star = oracle_lstar(&p);
        let mut cache = EstimationCache::new(p.graph());
        let r: AnytimeResult =
            slb::a_beauty_with(&p, &mut cache, slb::AnytimeConfig::new(10), None).unwrap();
        for w in r.log.windows(2) {
            if w[1].l_under <= w[0].l_under {
                strict.push((30_000 + seed, w[0].l_under, w[1].l_under, l_star));
            }
            if w[1].l_over > w[0].l_over {
                upper += 1;
            }
        }
        if !invocations_once(&cache) {
            cached += 1;
        }
        let mut cache2 = EstimationCache::new(p.graph());
        let r2 = slb::a_beauty_with(&p, &mut cache2, slb::AnytimeConfig::new(2), None).unwrap();
        if r2.iterations() > 2 || r2.l_star != l_star || !invocations_once(&cache2) {
            two += 1;
        }
    }
    let ok = strict.is_empty() && upper == 0 && cached == 0 && two == 0;
    verdict(
        7,
        "anytime monotonicity and caching",
        ok,
        &format!(
            "500 instances: {} non-increasing l_under steps (instance, prev, next, L*) {:?}; \
             {upper} l_over increases; {cached} repeated invocations; {two} A-BEAUTY-2 failures",
            strict.len(),
            strict
        ),
    );
}

fn trend_suite() -> SuiteConfig {
    SuiteConfig {
        instances: (1..=3)
            .map(|rng_seed| InstanceSpec::Random {
                n: 200,
                edge_prob: 0.05,
                cost_min: 1,
                cost_max: 20,
                rng_seed,
            })
            .collect(),
        seeds: (0..9).collect(),
        algorithms: vec![
            Algorithm::EiUcs,
            Algorithm::Beauty,
            Algorithm::ABeauty(2),
            Algorithm::ABeauty(10),
        ],
        timeout_seconds: 120.0,
        tau_v: 1.0,
    }
}

#[test]
fn c08_savings_trend() {
    let report = run_suite(&trend_suite(), FsPath::new(".")).unwrap();
    let mean = |alg| {
        report
            .summary(alg)
            .and_then(|s| s.r_l3)
            .map(|s| s.mean)
            .unwrap_or(f64::NAN)
    };
    let (beauty_r, any2_r, any10_r) = (
        mean(Algorithm::Beauty),
        mean(Algorithm::ABeauty(2)),
        mean(Algorithm::ABeauty(10)),
    );
    let ok = report.timeouts.is_empty()
        && report.disagreements.is_empty()
        && beauty_r < 1.0
        && any2_r <= beauty_r;
    verdict(
        8,
        "final-layer savings trend",
        ok,
        &format!(
            "mean r_L3: beauty {:.2}% (published 60.82%), abeauty-2 {:.2}% (published 46.03%), abeauty-10 {:.2}% (published 45.13%); \
             {} instances",
            100.0 * beauty_r,
            100.0 * any2_r,
            100.0 * any10_r,
            report.summary(Algorithm::Beauty).map(|s| s.instances).unwrap_or(0)
        ),
    );
}

#[test]
fn c09_pruning_sanity() {
    let report = run_suite(&trend_suite(), FsPath::new(".")).unwrap();
    let alg = Algorithm::ABeauty(10);
    let first: Vec<_> = report
        .iterations
        .iter()
        .filter(|r| r.algorithm == alg && r.iteration == 1)
        .collect();
    let first_zero =
        !first.is_empty() && first.iter().all(|r| r.prunings == 0 && r.evaluations > 0);
    let later: Vec<f64> = report
        .iterations
        .iter()
        .filter(|r| r.algorithm == alg && r.iteration >= 2 && r.evaluations > 0)
        .map(|r| r.prunings as f64 / r.evaluations as f64)
        .collect();
    let later_mean = if later.is_empty() {
        0.0
    } else {
        later.iter().sum::<f64>() / later.len() as f64
    };
    let per_iteration: Vec<String> = report
        .anytime_summary(alg)
        .map(|s| {
            s.pruning
                .iter()
                .enumerate()
                .filter_map(|(i, st)| st.map(|st| format!("i{}={:.2}%", i + 1, 100.0 * st.mean)))
                .collect()
        })
        .unwrap_or_default();
    verdict(
        9,
        "pruning sanity",
        first_zero && later_mean >= 0.0,
        &format!(
            "iteration-1 ratio 0 on {} runs; mean ratio over iterations >= 2: {:.4} ({} samples); [{}]",
            first.len(),
            later_mean,
            later.len(),
            per_iteration.join(" ")
        ),
    );
}

#[test]
fn c10_format_round_trip() {
    let mut instances = vec![example1()];
    for seed in 0..9 {
        instances.push(common::synthesized(40, 0.1, seed));
        let grid = gen_grid_graph(6, 6, (1, 9), seed).unwrap();
        instances.push(synth_estimators(&grid, &SynthConfig::new(seed)).unwrap());
    }
    let mut failures = 0;
    for p in &instances {
        let text = p.to_json();
        let again = Problem::from_json(&text).unwrap();
        if again.to_json() != text || &again != p || !validate_graph(p.graph()).is_empty() {
            failures += 1;
        }
    }
    verdict(
        10,
        "graph JSON round-trip and validation",
        failures == 0,
        &format!("{} instances, {failures} failures", instances.len()),
    );
}
