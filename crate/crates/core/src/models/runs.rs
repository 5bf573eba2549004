use super::FormulaVariant;
use crate::error::{invalid, Result};
use crate::family::FamilySummary;

fn check(n: u64, k: u64, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("runs: p must lie in [0,1], got {p}")));
    }
    if k < 1 {
        return Err(invalid("runs: k must be >= 1"));
    }
    if n < 2 * k {
        return Err(invalid(format!(
            "runs: the circular summary needs n >= 2k, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Circular `k`-runs: `Z_i = Y_i ... Y_{i+k-1}` with indices mod `n`.
///
/// Windows at circular distance `d < k` overlap in `k - d` positions, so
/// `E[Z_i Z_{i+d}] = p^{k+d}`; there are `n` such unordered pairs per offset.
pub fn runs_summary(n: u64, k: u64, p: f64, variant: FormulaVariant) -> Result<FamilySummary> {
    check(n, k, p)?;
    let nf = n as f64;
    let pk = p.powi(k as i32);
    let joint = |d: u64| p.powi((k + d) as i32);
    let (delta, cov) = match variant {
        FormulaVariant::FirstPrinciples => {
            let delta = nf * (1..k).map(joint).sum::<f64>();
            let cov = nf * (1..k).map(|d| joint(d) - pk * pk).sum::<f64>();
            (delta, cov)
        }
        FormulaVariant::PaperAsPrinted => {
            // (n/2) p^{k+1} (1 - p^{k-1}) / (1 - p), summed termwise so p = 1 is finite.
            let delta = nf / 2.0 * (1..k).map(joint).sum::<f64>();
            (delta, delta)
        }
    };
    Ok(FamilySummary::homogeneous(n, pk, delta, cov.max(0.0)))
}

/// Interval `center ± half_width` that the Poisson clump approximation
/// guarantees for `P(no circular k-run)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PoissonBand {
    pub center: f64,
    pub half_width: f64,
}

impl PoissonBand {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() <= self.half_width
    }
}

/// `exp(-n (1-p) p^k)` with error `(2k(1-p) + 1) p^k`.
pub fn runs_poisson_band(n: u64, k: u64, p: f64) -> Result<PoissonBand> {
    check(n, k, p)?;
    let pk = p.powi(k as i32);
    Ok(PoissonBand {
        center: (-(n as f64) * (1.0 - p) * pk).exp(),
        half_width: (2.0 * k as f64 * (1.0 - p) + 1.0) * pk,
    })
}

/// `ln` of the ceiling `e^{n p^k / (1 - p^k)}` on the ratio between the
/// optimized tilted bound and `(1 - p^k)^n`.
pub fn runs_log_correction_ceiling(n: u64, k: u64, p: f64) -> Result<f64> {
    check(n, k, p)?;
    let pk = p.powi(k as i32);
    Ok(n as f64 * pk / (1.0 - pk))
}

/// Linear `k`-runs in a string of length `n`: windows start at `1..=n-k+1`.
/// Pair sums are taken directly over the `n-k+1-d` pairs at each offset.
pub fn runs_summary_linear(n: u64, k: u64, p: f64) -> Result<FamilySummary> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("runs: p must lie in [0,1], got {p}")));
    }
    if k < 1 || n < k {
        return Err(invalid(format!("runs (linear): need 1 <= k <= n, got n={n}, k={k}")));
    }
    let windows = n - k + 1;
    let pk = p.powi(k as i32);
    let mut delta = 0.0;
    let mut cov = 0.0;
    for d in 1..k.min(windows) {
        let pairs = (windows - d) as f64;
        let joint = p.powi((k + d) as i32);
        delta += pairs * joint;
        cov += pairs * (joint - pk * pk);
    }
    Ok(FamilySummary::homogeneous(windows, pk, delta, cov.max(0.0)))
}
