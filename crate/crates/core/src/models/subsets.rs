use super::FormulaVariant;
use crate::error::{invalid, Result};
use crate::family::FamilySummary;
use crate::numerics::binom_f64;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("p must lie in [0,1], got {p}")))
    }
}

/// Triangles in `G(n, p)`.
///
/// Two distinct triangles sharing an edge use five edges, so their joint
/// expectation is `p^5`; each triangle shares an edge with `3(n-3)` others.
/// Triangles sharing at most a vertex are independent.
pub fn triangles_summary(n: u64, p: f64, variant: FormulaVariant) -> Result<FamilySummary> {
    check_p(p)?;
    if n < 3 {
        return Err(invalid(format!("triangles: need n >= 3, got {n}")));
    }
    let count = binom_f64(n, 3);
    let p3 = p.powi(3);
    let p5 = p.powi(5);
    let (delta, cov) = match variant {
        FormulaVariant::FirstPrinciples => {
            let pairs = 0.5 * count * 3.0 * (n - 3) as f64;
            (pairs * p5, pairs * (p5 - p3 * p3))
        }
        FormulaVariant::PaperAsPrinted => {
            let delta = 0.5 * count * 3.0 * n as f64 * p5;
            (delta, delta)
        }
    };
    Ok(FamilySummary::homogeneous(count as u64, p3, delta, cov.max(0.0)))
}

/// Complete U-statistic over `k`-subsets of `n` Bernoulli(`p`) variables.
///
/// Two `k`-subsets sharing exactly `m` indices have joint expectation
/// `p^{2k-m}`; a fixed subset has `C(k,m) C(n-k,k-m)` such partners.
pub fn ustat_summary(n: u64, k: u64, p: f64, variant: FormulaVariant) -> Result<FamilySummary> {
    check_p(p)?;
    if k < 1 || k > n {
        return Err(invalid(format!("ustat: need 1 <= k <= n, got n={n}, k={k}")));
    }
    let count = binom_f64(n, k as i64);
    let (ki, ni) = (k as i64, n as i64);
    let pk = p.powi(k as i32);
    let (delta, cov) = match variant {
        FormulaVariant::FirstPrinciples => {
            let mut delta = 0.0;
            let mut cov = 0.0;
            for m in 1..ki {
                let partners = binom_f64(k, m) * binom_f64(n - k, ki - m);
                let joint = p.powi((2 * ki - m) as i32);
                delta += partners * joint;
                cov += partners * (joint - pk * pk);
            }
            (0.5 * count * delta, 0.5 * count * cov)
        }
        FormulaVariant::PaperAsPrinted => {
            let sum: f64 = (1..ki)
                .map(|j| binom_f64((ni - ki) as u64, j) * p.powi((ki + j) as i32))
                .sum();
            let delta = 0.5 * count * sum;
            (delta, delta)
        }
    };
    Ok(FamilySummary::homogeneous(count.round() as u64, pk, delta, cov.max(0.0)))
}
