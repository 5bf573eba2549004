//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) and exits non-zero when any
//! criterion fails. `cargo test -p posbound-cli --test acceptance` runs it alone.

use std::process::Command;
use std::time::Instant;

use posbound::bounds::{
    boppona_spencer, evaluate_all_with, independent_lower, janson_ratio, lv_general, lv_iid,
    lv_optimal, EvalOptions,
};
use posbound::models::{
    hypergraph_edge_prob, hypergraph_pair_covariances, runs_log_correction_ceiling,
    runs_poisson_band, summary, trial_rng,
};
use posbound::numerics::binom_f64;
use posbound::oracles::{
    cover_all_exact, exact_zero_prob, mgf_gap_check, monte_carlo, random_monotone_law,
    runs_zero_exact, triangle_free_exact, ustat_zero_exact,
};
use posbound::{Eq2Form, FamilySummary, FormulaVariant, Method, ModelSpec, Tilt};
use rand::Rng;

/// Slack on comparisons with an exact probability.
const TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------- C1

fn domination_matrix() -> (Vec<ModelSpec>, Vec<ModelSpec>) {
    let ps = [0.05, 0.1, 0.3, 0.5];
    let mut assoc = Vec::new();
    for k in [2, 3, 4] {
        for n in 2 * k..=20 {
            for p in ps {
                assoc.push(ModelSpec::Runs { n, k, p, linear: false });
            }
        }
    }
    for k in [2, 3] {
        for n in k..=12 {
            for p in ps {
                assoc.push(ModelSpec::Ustat { n, k, p });
            }
        }
    }
    for n in [4, 5, 6] {
        for p in [0.1, 0.3, 0.5] {
            assoc.push(ModelSpec::Triangles { n, p });
        }
    }
    let mut cover = Vec::new();
    for big_n in [4, 5, 6] {
        for k in [2, 3] {
            for n_draws in 4..=64 {
                cover.push(ModelSpec::HypergraphCover { big_n, k, n_draws });
            }
        }
    }
    (assoc, cover)
}

#[derive(Default)]
struct Tally {
    instances: usize,
    checks: usize,
    upper_violations: usize,
    lower_violations: usize,
    skipped: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn run(&mut self, spec: &ModelSpec) {
        let opts = EvalOptions { eq2_form: Eq2Form::Standard, ..Default::default() };
        let s = summary(spec, FormulaVariant::FirstPrinciples).expect("summary");
        let truth = exact_zero_prob(spec).expect("oracle").linear();
        self.instances += 1;
        for o in evaluate_all_with(&s, &opts) {
            let Some(r) = o.result else {
                self.skipped += 1;
                continue;
            };
            let v = r.linear();
            let bad = if o.method == Method::IndependentLower {
                self.checks += 1;
                let bad = v > truth + TOL;
                self.lower_violations += bad as usize;
                bad
            } else if !r.vacuous {
                self.checks += 1;
                let bad = v < truth - TOL;
                self.upper_violations += bad as usize;
                bad
            } else {
                false
            };
            if bad && self.first_failure.is_none() {
                self.first_failure = Some(format!("{spec:?} {} = {v:.6e} vs exact {truth:.6e}", o.method.tag()));
            }
        }
    }

    fn failures(&self) -> usize {
        self.upper_violations + self.lower_violations
    }
}

fn c1_domination() -> Verdict {
    let start = Instant::now();
    let (assoc, cover) = domination_matrix();
    let mut a = Tally::default();
    let mut printed_undercuts = 0;
    for spec in &assoc {
        a.run(spec);
        let s = summary(spec, FormulaVariant::FirstPrinciples).unwrap();
        if let Ok(r) = janson_ratio(&s, Eq2Form::Printed) {
            let truth = exact_zero_prob(spec).unwrap().linear();
            printed_undercuts += (!r.vacuous && r.linear() < truth - TOL) as usize;
        }
    }
    let mut h = Tally::default();
    for spec in &cover {
        h.run(spec);
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = a.failures() == 0 && h.failures() == 0 && secs < 120.0;
    let mut detail = format!(
        "associated models: {} instances, {} checks, {} violations; hypergraph-cover: {} instances, \
         {} checks, {} upper + {} lower violations, {} bounds skipped for negative cov_sum; \
         printed ratio form undercuts the truth in {} associated instances (gated on the standard form); {:.1} s",
        a.instances,
        a.checks,
        a.failures(),
        h.instances,
        h.checks,
        h.upper_violations,
        h.lower_violations,
        h.skipped,
        printed_undercuts,
        secs
    );
    for f in a.first_failure.iter().chain(&h.first_failure) {
        detail.push_str(&format!("; e.g. {f}"));
    }
    verdict(pass, detail)
}

// ---------------------------------------------------------------- C2

/// Longest circular run of ones in the low `n` bits of `s`.
fn longest_circular_run(s: u64, n: u32) -> u32 {
    if s == (1u64 << n) - 1 {
        return n;
    }
    let doubled = s | s << n;
    let (mut best, mut cur) = (0, 0);
    for i in 0..2 * n {
        if doubled >> i & 1 == 1 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best.min(n)
}

fn c2_oracles() -> Verdict {
    let mut worst_runs = 0.0f64;
    for n in 1..=20u32 {
        // counts[ones][longest run]
        let mut counts = vec![vec![0u64; n as usize + 1]; n as usize + 1];
        for s in 0u64..1 << n {
            counts[s.count_ones() as usize][longest_circular_run(s, n) as usize] += 1;
        }
        for k in 1..=n {
            for p in [0.1f64, 0.3, 0.5, 0.9] {
                let brute: f64 = (0..=n as usize)
                    .map(|j| {
                        let c: u64 = counts[j][..k as usize].iter().sum();
                        c as f64 * p.powi(j as i32) * (1.0 - p).powi(n as i32 - j as i32)
                    })
                    .sum();
                let got = runs_zero_exact(n as u64, k as u64, p).unwrap().linear();
                worst_runs = worst_runs.max(rel(got, brute));
            }
        }
    }
    let mut worst_ustat = 0.0f64;
    for n in 1..=12u32 {
        for k in 1..=n {
            for p in [0.1f64, 0.3, 0.5, 0.9] {
                let brute: f64 = (0u32..1 << n)
                    .filter(|s| s.count_ones() < k)
                    .map(|s| p.powi(s.count_ones() as i32) * (1.0 - p).powi((n - s.count_ones()) as i32))
                    .sum();
                let got = ustat_zero_exact(n as u64, k as u64, p).unwrap().linear();
                worst_ustat = worst_ustat.max(rel(got, brute));
            }
        }
    }
    let mut worst_cover = 0.0f64;
    for d in 1..=30u32 {
        let closed = (3f64.powi(d as i32) - 3.0 * 2f64.powi(d as i32) + 3.0) / 3f64.powi(d as i32);
        let got = cover_all_exact(3, 2, d as u64).unwrap().linear();
        worst_cover = worst_cover.max(if closed == 0.0 { got.abs() } else { rel(got, closed) });
    }
    let tri = triangle_free_exact(4, 0.5).unwrap().linear();
    let tri_err = rel(tri, 41.0 / 64.0);
    let pass = worst_runs <= 1e-12 && worst_ustat <= 1e-12 && worst_cover <= 1e-10 && tri_err <= 1e-12;
    verdict(
        pass,
        format!(
            "runs vs 2^n brute force max rel err {worst_runs:.1e} (tol 1e-12); ustat vs enumeration \
             {worst_ustat:.1e}; cover(3,2,n) vs closed form {worst_cover:.1e} (tol 1e-10); \
             triangle_free(4,0.5) = {tri} (41/64)"
        ),
    )
}

// ---------------------------------------------------------------- C3

fn c3_lv_identity() -> Verdict {
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let mut rng = trial_rng(0xC3, i);
        let count = rng.random_range(1..=10_000u64);
        let p = 10f64.powf(rng.random_range(-6.0..-0.05));
        let delta = rng.random_range(0.0..10.0);
        let cov = delta * rng.random_range(0.0..=1.0);
        let s = FamilySummary::homogeneous(count, p, delta, cov);
        let mut ts = vec![Tilt::Linear(10f64.powf(rng.random_range(-3.0..1.7)))];
        if let Ok(opt) = lv_optimal(&s) {
            ts.extend(opt.t);
        }
        for t in ts {
            let g = lv_general(&s, t).unwrap().value.log_value();
            let h = lv_iid(&s, t).unwrap().value.log_value();
            worst = worst.max(rel(g, h));
        }
    }
    verdict(
        worst <= 1e-12,
        format!("1000 random homogeneous summaries, max relative log-domain gap {worst:.2e} (tol 1e-12)"),
    )
}

// ---------------------------------------------------------------- C4

fn c4_lemma() -> Verdict {
    let ts = [0.1, 0.5, 1.0, 2.0];
    let (mut checks, mut violations, mut max_ratio) = (0, 0, 0.0f64);
    for i in 0..1000u64 {
        let m = 2 + (i % 7) as usize;
        let law = random_monotone_law(&mut trial_rng(0xC4, i), m, m).unwrap();
        for t in ts {
            let r = mgf_gap_check(&law, t, 1.0).unwrap();
            checks += 1;
            violations += (!r.holds) as usize;
            if r.bound > 0.0 {
                max_ratio = max_ratio.max(r.gap / r.bound);
            }
        }
    }
    verdict(
        violations == 0,
        format!(
            "1000 random monotone laws on 2..=8 coins x t in {ts:?}: {checks} checks, {violations} violations, \
             max gap/bound {max_ratio:.3}"
        ),
    )
}

// ---------------------------------------------------------------- C5

fn c5_runs_regime() -> Verdict {
    let (n, k) = (10_000u64, 3u64);
    let p = 0.5 * (n as f64).powf(-1.0 / 3.0);
    let s = summary(&ModelSpec::Runs { n, k, p, linear: false }, FormulaVariant::FirstPrinciples).unwrap();
    let lv = lv_optimal(&s).unwrap();
    let pk = p.powi(k as i32);
    let log_ratio = lv.value.log_value() - n as f64 * (-pk).ln_1p();
    let ceiling = runs_log_correction_ceiling(n, k, p).unwrap();
    let ratio_ok = log_ratio.exp() <= ceiling.exp() + TOL;

    let (mut inside, mut total, mut first_miss) = (0, 0, None);
    for kk in [2u64, 3, 4] {
        for nn in 2 * kk..=20 {
            for pp in [0.05, 0.1, 0.3, 0.5] {
                let band = runs_poisson_band(nn, kk, pp).unwrap();
                let exact = runs_zero_exact(nn, kk, pp).unwrap().linear();
                total += 1;
                if band.contains(exact) {
                    inside += 1;
                } else if first_miss.is_none() {
                    first_miss = Some(format!("n={nn} k={kk} p={pp}: exact {exact:.6} vs {band:?}"));
                }
            }
        }
    }
    let mut detail = format!(
        "n=1e4, k=3, p={p:.5}: bound/(1-p^k)^n = e^{log_ratio:.6} <= e^{ceiling:.6}; \
         Poisson band holds in {inside}/{total} small instances"
    );
    if let Some(m) = first_miss {
        detail.push_str(&format!("; first miss {m}"));
    }
    verdict(ratio_ok && inside == total, detail)
}

// ---------------------------------------------------------------- C6

fn c6_hypergraph() -> Verdict {
    let (big_n, k, lambda) = (10u64, 3u64, 2u64);
    let n_draws = lambda * big_n * big_n;
    let spec = ModelSpec::HypergraphCover { big_n, k, n_draws };
    let s = summary(&spec, FormulaVariant::FirstPrinciples).unwrap();
    let bs = boppona_spencer(&s).unwrap();
    let lv = lv_optimal(&s);
    let indep = independent_lower(&s);
    let pairs = binom_f64(big_n, 2);
    let e = (-6.0 * lambda as f64).exp();
    let log_factor = pairs * e / (1.0 - e);

    let bs_vacuous = bs.vacuous;
    let (lv_ok, close_ok, lv_log) = match &lv {
        Ok(r) => {
            let gap = r.value.log_value() - indep.value.log_value();
            (!r.vacuous && r.value.log_value() < 0.0, gap <= log_factor, r.value.log_value())
        }
        Err(_) => (false, false, f64::NAN),
    };
    // a tilt far below anything the optimizer visits
    let tiny = lv_general(&s, Tilt::Log(-690.0)).map(|r| r.value.log_value());
    let mc = monte_carlo(&spec, 1_000_000, 0xC6, 0.99).unwrap();
    let bracket = mc.ci.upper >= indep.linear() && mc.ci.lower <= lv_log.exp();
    let p = hypergraph_edge_prob(big_n, k, n_draws).unwrap().linear();
    let draws_for_vacuity = (1..=n_draws)
        .rev()
        .find(|&d| {
            let s = summary(&ModelSpec::HypergraphCover { big_n, k, n_draws: d }, FormulaVariant::FirstPrinciples);
            s.ok().and_then(|s| boppona_spencer(&s).ok()).is_some_and(|b| b.vacuous)
        });
    verdict(
        bs_vacuous && lv_ok && close_ok && bracket,
        format!(
            "N=10, k=3, n=200 (p={p:.3e}): boppona-spencer log = {:.6e} (vacuous: {bs_vacuous}; it is vacuous only \
             up to n={}); lv-optimal log = {lv_log:.6e} (< 0: {lv_ok}); lv - independent = {:.3e} <= {log_factor:.3e}: \
             {close_ok}; lv at t=e^-690 log = {:.6e}; MC 1e6 estimate {:.8} CI [{:.8}, {:.8}] meets \
             [independent, lv]: {bracket}",
            bs.value.log_value(),
            draws_for_vacuity.map_or("none".to_string(), |d| d.to_string()),
            lv_log - indep.value.log_value(),
            tiny.unwrap_or(f64::NAN),
            mc.estimate,
            mc.ci.lower,
            mc.ci.upper,
        ),
    )
}

// ---------------------------------------------------------------- C7

fn c7_covariance_asymptotics() -> Verdict {
    let k = 3u64;
    let mut parts = Vec::new();
    let mut at_80 = f64::NAN;
    for big_n in [20u64, 40, 80] {
        let d = 2 * big_n * big_n;
        let c = hypergraph_pair_covariances(big_n, k, d).unwrap();
        let scale = d as f64 * 6.0 / (big_n as f64).powi(3);
        let ratio = c.share / scale;
        let p = hypergraph_edge_prob(big_n, k, d).unwrap().linear();
        parts.push(format!("N={big_n}: ratio {ratio:.3e} (divided by p^2: {:.4})", ratio / (p * p)));
        if big_n == 80 {
            at_80 = ratio;
        }
    }
    verdict(
        (0.7..=1.3).contains(&at_80),
        format!("share covariance / (n 6 / N^3): {}; needs [0.7, 1.3] at N=80", parts.join(", ")),
    )
}

// ---------------------------------------------------------------- C8

fn c8_determinism() -> Verdict {
    let base = [
        "mc", "--model", "runs", "--n", "100", "--k", "3", "--p", "0.3", "--trials", "300000", "--seed", "12345",
    ];
    let run = |workers: Option<&str>| {
        let mut args = base.to_vec();
        if let Some(w) = workers {
            args.extend(["--workers", w]);
        }
        let out = Command::new(env!("CARGO_BIN_EXE_posbound")).args(&args).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let reference = run(None);
    let mut same = 0;
    let mut total = 0;
    for w in [Some("1"), Some("4"), Some("8"), None] {
        for _ in 0..2 {
            total += 1;
            same += (run(w) == reference) as usize;
        }
    }
    verdict(
        same == total,
        format!("{same}/{total} repeated `mc` runs (workers 1, 4, 8, default) byte-identical on stdout"),
    )
}

// ---------------------------------------------------------------- C9

fn c9_throughput() -> Verdict {
    let spec = ModelSpec::Runs { n: 100, k: 3, p: 0.3, linear: false };
    let trials = 1_000_000;
    let start = Instant::now();
    let e = monte_carlo(&spec, trials, 9, 0.95).unwrap();
    let rate = trials as f64 / start.elapsed().as_secs_f64();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    verdict(
        rate >= 1e5,
        format!("runs n=100: {rate:.3e} trials/s on {threads} threads (floor 1e5); estimate {:.5}", e.estimate),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("C1", "domination suite", c1_domination),
        ("C2", "oracle cross-validation", c2_oracles),
        ("C3", "general/iid tilted bound identity", c3_lv_identity),
        ("C4", "MGF gap lemma", c4_lemma),
        ("C5", "runs regime and Poisson band", c5_runs_regime),
        ("C6", "hypergraph comparison at N=10", c6_hypergraph),
        ("C7", "covariance asymptotics", c7_covariance_asymptotics),
        ("C8", "Monte Carlo determinism", c8_determinism),
        ("C9", "Monte Carlo throughput", c9_throughput),
    ];
    let mut passed = 0;
    for (id, name, f) in criteria {
        let v = f();
        passed += v.pass as usize;
        println!("{} {id} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
