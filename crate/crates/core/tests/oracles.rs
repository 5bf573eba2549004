//! Exact oracles against brute force and closed forms, and Monte Carlo
//! against the oracles.

use posbound::oracles::{
    cover_all_exact, monte_carlo, runs_zero_exact, runs_zero_exact_linear, triangle_free_exact,
    ustat_zero_exact,
};
use posbound::ModelSpec;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn weight(bits: u32, ones: u32, p: f64) -> f64 {
    p.powi(ones as i32) * (1.0 - p).powi((bits - ones) as i32)
}

/// Sums the Bernoulli(`p`) weight of every `n`-bit string whose popcount
/// is `ones`, grouping strings by popcount to keep the sum accurate.
fn brute(n: u32, p: f64, keep: impl Fn(u32) -> bool) -> f64 {
    let mut by_ones = vec![0u64; n as usize + 1];
    for s in 0u32..1 << n {
        if keep(s) {
            by_ones[s.count_ones() as usize] += 1;
        }
    }
    by_ones
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 * weight(n, j as u32, p))
        .sum()
}

fn has_circular_run(s: u32, n: u32, k: u32) -> bool {
    let doubled = (s as u64) | (s as u64) << n;
    (0..n).any(|i| (doubled >> i) & ((1u64 << k) - 1) == (1u64 << k) - 1)
}

fn has_linear_run(s: u32, n: u32, k: u32) -> bool {
    k <= n && (0..=n - k).any(|i| (s >> i) & ((1u32 << k) - 1) == (1u32 << k) - 1)
}

#[test]
fn runs_transfer_matrix_matches_brute_force() {
    for n in 1..=20u32 {
        for k in 1..=n {
            for &p in &[0.1, 0.3, 0.5, 0.9] {
                let truth = brute(n, p, |s| !has_circular_run(s, n, k));
                let got = runs_zero_exact(n as u64, k as u64, p).unwrap().linear();
                assert!(rel(got, truth) < 1e-12, "n={n} k={k} p={p}: {got} vs {truth}");
            }
        }
    }
}

#[test]
fn linear_runs_match_brute_force() {
    for n in 1..=16u32 {
        for k in 1..=n + 1 {
            let truth = brute(n, 0.35, |s| !has_linear_run(s, n, k));
            let got = runs_zero_exact_linear(n as u64, k as u64, 0.35).unwrap().linear();
            assert!(rel(got, truth) < 1e-12, "n={n} k={k}");
        }
    }
}

#[test]
fn ustat_tail_matches_enumeration() {
    for n in 1..=12u32 {
        for k in 1..=n {
            for &p in &[0.05, 0.4, 0.8] {
                let truth = brute(n, p, |s| s.count_ones() < k);
                let got = ustat_zero_exact(n as u64, k as u64, p).unwrap().linear();
                assert!(rel(got, truth) < 1e-12, "n={n} k={k} p={p}");
            }
        }
    }
}

#[test]
fn coupon_collector_closed_form() {
    for d in 1..=30i32 {
        // 1 - 3 (2/3)^n + 3 (1/3)^n over the common denominator 3^n
        let num = 3i64.pow(d as u32) - 3 * 2i64.pow(d as u32) + 3;
        let closed = num as f64 / 3f64.powi(d);
        assert!((closed - (1.0 - 3.0 * (2.0f64 / 3.0).powi(d) + 3.0 * (1.0f64 / 3.0).powi(d))).abs() < 1e-15);
        let got = cover_all_exact(3, 2, d as u64).unwrap().linear();
        if closed == 0.0 {
            assert_eq!(got, 0.0, "n={d}");
        } else {
            assert!(rel(got, closed) < 1e-10, "n={d}: {got} vs {closed}");
        }
    }
}

#[test]
fn triangle_free_k4_is_41_over_64() {
    let got = triangle_free_exact(4, 0.5).unwrap().linear();
    assert!(rel(got, 41.0 / 64.0) < 1e-14);
}

#[test]
fn cover_is_monotone_in_draws() {
    for (big_n, k) in [(4u64, 2u64), (5, 3), (6, 3), (7, 4)] {
        let mut prev = 0.0;
        for d in 1..80 {
            let v = cover_all_exact(big_n, k, d).unwrap().linear();
            assert!(v >= prev - 1e-15, "N={big_n} k={k} d={d}");
            prev = v;
        }
        assert!(prev > 0.9);
    }
}

#[test]
fn mc_runs_brackets_one_half() {
    let spec = ModelSpec::Runs { n: 3, k: 2, p: 0.5, linear: false };
    let e = monte_carlo(&spec, 1_000_000, 42, 0.99).unwrap();
    assert!(e.ci.contains(0.5), "{e:?}");
}

#[test]
fn mc_triangles_brackets_exact() {
    let spec = ModelSpec::Triangles { n: 6, p: 0.5 };
    let truth = triangle_free_exact(6, 0.5).unwrap().linear();
    let e = monte_carlo(&spec, 1_000_000, 7, 0.99).unwrap();
    assert!(e.ci.contains(truth), "{e:?} vs {truth}");
}

#[test]
fn mc_ustat_brackets_binomial_tail() {
    let spec = ModelSpec::Ustat { n: 20, k: 3, p: 0.1 };
    let truth = ustat_zero_exact(20, 3, 0.1).unwrap().linear();
    let e = monte_carlo(&spec, 1_000_000, 9, 0.99).unwrap();
    assert!(e.ci.contains(truth), "{e:?} vs {truth}");
}

#[test]
fn mc_cover_brackets_exact() {
    let spec = ModelSpec::HypergraphCover { big_n: 6, k: 3, n_draws: 20 };
    let truth = cover_all_exact(6, 3, 20).unwrap().linear();
    let e = monte_carlo(&spec, 200_000, 3, 0.99).unwrap();
    assert!(e.ci.contains(truth), "{e:?} vs {truth}");
}
