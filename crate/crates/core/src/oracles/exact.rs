//! Exact `P(Z = 0)` for each built-in family.

use num_bigint::{BigInt, BigUint, Sign};

use crate::error::{invalid, Error, Result};
use crate::models::big_ratio;
use crate::numerics::{log_binom, log_sum_exp, LogProb};

/// `x * ln(q)` with the convention `0 * ln 0 = 0`.
fn log_pow(log_base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * log_base
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("p must lie in [0,1], got {p}")))
    }
}

/// `ln P(no k consecutive ones)` in linear Bernoulli strings of every length
/// `0..=n`, from the transfer matrix over trailing-run states `0..k`.
fn linear_no_run_logs(n: usize, k: usize, p: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut state = vec![0.0; k];
    state[0] = 1.0;
    let mut log_scale = 0.0;
    out.push(0.0);
    for _ in 0..n {
        let total: f64 = state.iter().sum();
        let mut next = vec![0.0; k];
        next[0] = (1.0 - p) * total;
        for j in 1..k {
            next[j] = p * state[j - 1];
        }
        let mass: f64 = next.iter().sum();
        if mass == 0.0 {
            // Every continuation contains a run; stays impossible.
            out.push(f64::NEG_INFINITY);
            state = next;
            continue;
        }
        // Renormalize so long strings do not underflow.
        for v in &mut next {
            *v /= mass;
        }
        log_scale += mass.ln();
        out.push(log_scale);
        state = next;
    }
    out
}

/// Exact `P(no k-run)` in a circular Bernoulli(`p`) string of length `n`.
///
/// Conditioning on the `a` leading and `b` trailing ones (which join across
/// the wrap), the string is `1^a 0 [middle] 0 1^b` with the middle a linear
/// string avoiding `k`-runs, or `1^a 0 1^b` when only one zero occurs.
pub fn runs_zero_exact(n: u64, k: u64, p: f64) -> Result<LogProb> {
    check_p(p)?;
    if n < 1 || k < 1 {
        return Err(invalid(format!("runs: need n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    let (n, k) = (n as usize, k as usize);
    if p == 0.0 {
        return Ok(LogProb::ONE);
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    let linear = linear_no_run_logs(n, k, p);
    let mut terms = Vec::new();
    // Exactly one zero: the wrapped run has length n - 1.
    if n - 1 < k {
        terms.push(LogProb::from_log(
            (n as f64).ln() + log_pow(lp, (n - 1) as f64) + lq,
        ));
    }
    // At least two zeros.
    if n >= 2 {
        for a in 0..k {
            for b in 0..k - a {
                if a + b + 2 > n {
                    break;
                }
                let middle = n - a - b - 2;
                let log = log_pow(lp, (a + b) as f64) + 2.0 * lq + linear[middle];
                if let Some(t) = LogProb::try_from_log(log) {
                    terms.push(t);
                }
            }
        }
    }
    Ok(log_sum_exp(terms))
}

/// Exact `P(no k-run)` in a linear Bernoulli(`p`) string of length `n`;
/// one when `n < k`.
pub fn runs_zero_exact_linear(n: u64, k: u64, p: f64) -> Result<LogProb> {
    check_p(p)?;
    if k < 1 {
        return Err(invalid("runs: k must be >= 1"));
    }
    Ok(LogProb::from_log(
        linear_no_run_logs(n as usize, k as usize, p)[n as usize],
    ))
}

/// `P(Binomial(n, p) <= k - 1)`: the U-statistic vanishes iff fewer than
/// `k` of the underlying variables are one.
pub fn ustat_zero_exact(n: u64, k: u64, p: f64) -> Result<LogProb> {
    check_p(p)?;
    if k < 1 || k > n {
        return Err(invalid(format!("ustat: need 1 <= k <= n, got n={n}, k={k}")));
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let terms = (0..k).filter_map(|j| {
        let log = log_binom(n, j as i64).log_value()
            + log_pow(lp, j as f64)
            + log_pow(lq, (n - j) as f64);
        LogProb::try_from_log(log)
    });
    Ok(log_sum_exp(terms))
}

/// Edge index of `{a, b}` in the lexicographic order of `K_n` edges.
fn edge_id(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Edge masks of every `k`-clique of `K_n`.
fn clique_masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n)
        .filter(|w| w.count_ones() as usize == k)
        .map(|w| {
            let mut mask = 0u32;
            for a in 0..n {
                for b in a + 1..n {
                    if w >> a & 1 == 1 && w >> b & 1 == 1 {
                        mask |= 1 << edge_id(n, a, b);
                    }
                }
            }
            mask
        })
        .collect()
}

pub const TRIANGLE_ORACLE_MAX_N: u64 = 7;

/// Number of triangle-free labelled graphs on `n` vertices with `e` edges,
/// for every `e`.
pub fn triangle_free_counts(n: u64) -> Result<Vec<u64>> {
    if !(3..=TRIANGLE_ORACLE_MAX_N).contains(&n) {
        return Err(Error::OracleRange(format!(
            "triangle_free_exact enumerates 2^C(n,2) graphs and needs 3 <= n <= 7, got {n}"
        )));
    }
    let n = n as usize;
    let edges = n * (n - 1) / 2;
    let triangles = clique_masks(n, 3);
    let mut counts = vec![0u64; edges + 1];
    for g in 0u32..1 << edges {
        if triangles.iter().all(|&t| g & t != t) {
            counts[g.count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

/// Exact `P(G(n,p) is triangle-free)` by enumerating all graphs.
pub fn triangle_free_exact(n: u64, p: f64) -> Result<LogProb> {
    check_p(p)?;
    let counts = triangle_free_counts(n)?;
    let edges = counts.len() - 1;
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let terms = counts.iter().enumerate().filter(|(_, &c)| c > 0).filter_map(|(e, &c)| {
        LogProb::try_from_log(
            (c as f64).ln() + log_pow(lp, e as f64) + log_pow(lq, (edges - e) as f64),
        )
    });
    Ok(log_sum_exp(terms))
}

pub const COVER_ORACLE_MAX_N: u64 = 7;

/// Inclusion–exclusion coefficients for covering `K_N` with uniform `K_k`
/// draws: `P(all covered) = sum_c coeff[c] (c / C(N,k))^n`, where `c` counts
/// the cliques avoiding an edge set `S` and `coeff[c] = sum (-1)^{|S|}`.
#[derive(Debug, Clone)]
pub struct CoverTable {
    cliques: u64,
    coeff: Vec<i64>,
}

impl CoverTable {
    pub fn new(big_n: u64, k: u64) -> Result<Self> {
        if !(2..=COVER_ORACLE_MAX_N).contains(&big_n) || k < 2 || k > big_n {
            return Err(Error::OracleRange(format!(
                "cover_all_exact needs 2 <= k <= N <= 7, got N={big_n}, k={k}"
            )));
        }
        let n = big_n as usize;
        let edges = n * (n - 1) / 2;
        let cliques = clique_masks(n, k as usize);
        let mut coeff = vec![0i64; cliques.len() + 1];
        for s in 0u32..1 << edges {
            let avoiding = cliques.iter().filter(|&&w| w & s == 0).count();
            if s.count_ones() % 2 == 0 {
                coeff[avoiding] += 1;
            } else {
                coeff[avoiding] -= 1;
            }
        }
        Ok(CoverTable {
            cliques: cliques.len() as u64,
            coeff,
        })
    }

    /// Exact `P(all edges covered after n_draws draws)`, summed in big
    /// integers so the alternating series loses nothing.
    pub fn prob(&self, n_draws: u64) -> LogProb {
        let exp = n_draws as u32;
        let mut numerator = BigInt::from(0);
        for (c, &coeff) in self.coeff.iter().enumerate() {
            if coeff != 0 {
                numerator += BigInt::from(coeff) * BigInt::from(c as u64).pow(exp);
            }
        }
        let denominator = BigUint::from(self.cliques).pow(exp);
        match numerator.sign() {
            Sign::Plus => {
                let num = numerator.magnitude();
                LogProb::from_log(big_ratio(num, &denominator).ln())
            }
            _ => LogProb::ZERO,
        }
    }
}

/// Exact probability that `n_draws` uniform `K_k`'s cover every edge of `K_N`.
pub fn cover_all_exact(big_n: u64, k: u64, n_draws: u64) -> Result<LogProb> {
    if n_draws < 1 {
        return Err(invalid("hypergraph-cover: n_draws must be >= 1"));
    }
    Ok(CoverTable::new(big_n, k)?.prob(n_draws))
}
