use serde::{Deserialize, Serialize};
use statrs::function::beta::inv_beta_reg;

use crate::error::{invalid, Result};

/// A two-sided confidence interval for a probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Exact (Clopper–Pearson) binomial interval by Beta-quantile inversion.
pub fn clopper_pearson(successes: u64, trials: u64, level: f64) -> Result<ConfidenceInterval> {
    if trials == 0 {
        return Err(invalid("clopper_pearson needs at least one trial"));
    }
    if successes > trials {
        return Err(invalid(format!(
            "successes ({successes}) exceed trials ({trials})"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid(format!("confidence level must be in (0,1), got {level}")));
    }
    let alpha = 1.0 - level;
    let (x, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        inv_beta_reg(x, n - x + 1.0, alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        inv_beta_reg(x + 1.0, n - x, 1.0 - alpha / 2.0)
    };
    Ok(ConfidenceInterval {
        lower: lower.clamp(0.0, 1.0),
        upper: upper.clamp(lower, 1.0),
        level,
    })
}
