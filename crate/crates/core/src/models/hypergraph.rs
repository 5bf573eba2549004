//! Covering `K_N` by `n` independent uniform `K_k` draws.
//!
//! `Z_e` is the indicator that edge `e` is still uncovered. Per draw, with
//! `C = C(N,k)`:
//!
//! * `A = C(N-2, k-2)` draws cover a fixed edge;
//! * `B_share = C(N-3, k-3)` cover both edges of a vertex-sharing pair;
//! * `B_disjoint = C(N-4, k-4)` cover both edges of a disjoint pair.
//!
//! All ratios are formed from exact big integers before taking logs, so
//! probabilities like `(1 - A/C)^n` keep full relative precision.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::family::FamilySummary;
use crate::numerics::{binom_f64, LogProb};

fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `num / den` as `f64` with full relative precision.
pub(crate) fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (n, d) = (num >> shift, den >> shift);
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b > 0.0 => a / b,
        _ => {
            // Both are huge but their ratio is tame: compare leading bits.
            let top = num.bits().max(den.bits()) - 60;
            (num >> top).to_f64().unwrap() / (den >> top).to_f64().unwrap()
        }
    }
}

/// Per-draw counts for one `(N, k)`.
struct DrawCounts {
    total: BigUint,
    cover_edge: BigUint,
    cover_share: BigUint,
    cover_disjoint: BigUint,
}

impl DrawCounts {
    fn new(big_n: u64, k: u64) -> Self {
        let k = k as i64;
        DrawCounts {
            total: binom(big_n, k),
            cover_edge: binom(big_n.saturating_sub(2), k - 2),
            cover_share: binom(big_n.saturating_sub(3), k - 3),
            cover_disjoint: if big_n >= 4 {
                binom(big_n - 4, k - 4)
            } else {
                BigUint::zero()
            },
        }
    }

    /// `n ln(1 - miss/total)`.
    fn log_survive(&self, miss: &BigUint, n_draws: u64) -> LogProb {
        if *miss == self.total {
            return LogProb::ZERO;
        }
        let frac = big_ratio(miss, &self.total);
        LogProb::from_log(n_draws as f64 * (-frac).ln_1p())
    }
}

fn check(big_n: u64, k: u64, n_draws: u64) -> Result<()> {
    if k < 2 || k > big_n {
        return Err(invalid(format!(
            "hypergraph-cover: need 2 <= k <= N, got N={big_n}, k={k}"
        )));
    }
    if n_draws < 1 {
        return Err(invalid("hypergraph-cover: n_draws must be >= 1"));
    }
    Ok(())
}

/// `P(a fixed edge is uncovered) = (1 - C(N-2,k-2)/C(N,k))^n`.
pub fn hypergraph_edge_prob(big_n: u64, k: u64, n_draws: u64) -> Result<LogProb> {
    check(big_n, k, n_draws)?;
    let c = DrawCounts::new(big_n, k);
    Ok(c.log_survive(&c.cover_edge, n_draws))
}

/// Probabilities that two edges are both uncovered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbs {
    /// Edges sharing a vertex.
    pub share: LogProb,
    /// Vertex-disjoint edges; `None` when `N < 4`.
    pub disjoint: Option<LogProb>,
}

/// Joint uncovered probabilities, evaluated from the case split over how a
/// draw meets the three (or four) endpoint vertices:
///
/// * share: `(C(N-3,k) + 3 C(N-3,k-1) + C(N-3,k-2)) / C(N,k)` per draw;
/// * disjoint: `(C(N-4,k) + 4 C(N-4,k-1) + 4 C(N-4,k-2)) / C(N,k)` per draw.
pub fn hypergraph_joint_probs(big_n: u64, k: u64, n_draws: u64) -> Result<JointProbs> {
    check(big_n, k, n_draws)?;
    if big_n < 3 {
        return Err(invalid("hypergraph-cover: joint probabilities need N >= 3"));
    }
    let c = DrawCounts::new(big_n, k);
    let ki = k as i64;
    let avoid_share =
        binom(big_n - 3, ki) + binom(big_n - 3, ki - 1) * 3u32 + binom(big_n - 3, ki - 2);
    let share = c.log_survive(&(&c.total - avoid_share), n_draws);
    let disjoint = (big_n >= 4).then(|| {
        let avoid = binom(big_n - 4, ki)
            + binom(big_n - 4, ki - 1) * 4u32
            + binom(big_n - 4, ki - 2) * 4u32;
        c.log_survive(&(&c.total - avoid), n_draws)
    });
    Ok(JointProbs { share, disjoint })
}

/// `Cov(Z_e, Z_f)` for a vertex-sharing and a disjoint pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCovariances {
    pub share: f64,
    pub disjoint: f64,
}

/// Exact pair covariances.
///
/// With `a = A/C` and `b = B/C`, one draw leaves both edges uncovered with
/// probability `1 - 2a + b`, so
/// `q / p^2 = (1 + (b - a^2)/(1 - a)^2)^n` and
/// `Cov = p^2 (exp(n ln1p((BC - A^2)/(C - A)^2)) - 1)`.
/// The numerator `BC - A^2` is signed: disjoint pairs are negatively
/// correlated whenever `k < 4` makes `B_disjoint = 0`.
pub fn hypergraph_pair_covariances(big_n: u64, k: u64, n_draws: u64) -> Result<PairCovariances> {
    check(big_n, k, n_draws)?;
    let c = DrawCounts::new(big_n, k);
    if c.cover_edge == c.total {
        return Ok(PairCovariances { share: 0.0, disjoint: 0.0 });
    }
    let p2 = 2.0 * c.log_survive(&c.cover_edge, n_draws).log_value();
    let miss = &c.total - &c.cover_edge;
    let den = &miss * &miss;
    let a2 = &c.cover_edge * &c.cover_edge;
    let cov = |both: &BigUint| {
        let bc = both * &c.total;
        let rel = if bc >= a2 {
            big_ratio(&(&bc - &a2), &den)
        } else {
            -big_ratio(&(&a2 - &bc), &den)
        };
        let log_ratio = n_draws as f64 * rel.ln_1p();
        p2.exp() * log_ratio.exp_m1()
    };
    Ok(PairCovariances {
        share: if big_n >= 3 { cov(&c.cover_share) } else { 0.0 },
        disjoint: if big_n >= 4 { cov(&c.cover_disjoint) } else { 0.0 },
    })
}

/// Summary of the uncovered-edge family. Every pair of edges is
/// correlated; each edge has `2(N-2)` vertex-sharing partners and
/// `C(N-2,2)` disjoint ones.
pub fn hypergraph_summary(big_n: u64, k: u64, n_draws: u64) -> Result<FamilySummary> {
    check(big_n, k, n_draws)?;
    if big_n < 4 {
        return Err(invalid(format!("hypergraph-cover: summary needs N >= 4, got {big_n}")));
    }
    let p = hypergraph_edge_prob(big_n, k, n_draws)?.linear();
    let q = hypergraph_joint_probs(big_n, k, n_draws)?;
    let cov = hypergraph_pair_covariances(big_n, k, n_draws)?;
    let edges = binom_f64(big_n, 2);
    let share_pairs = (big_n - 2) as f64;
    let disjoint_pairs = 0.5 * binom_f64(big_n - 2, 2);
    let delta = edges
        * (share_pairs * q.share.linear()
            + disjoint_pairs * q.disjoint.expect("N >= 4").linear());
    let cov_sum = edges * (share_pairs * cov.share + disjoint_pairs * cov.disjoint);
    Ok(FamilySummary::homogeneous(edges as u64, p, delta, cov_sum))
}
