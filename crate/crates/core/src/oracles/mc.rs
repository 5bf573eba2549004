use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::family::ModelSpec;
use crate::models::Sampler;
use crate::numerics::{clopper_pearson, ConfidenceInterval};

/// Monte Carlo estimate of `P(Z = 0)` with an exact binomial interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub estimate: f64,
    pub ci: ConfidenceInterval,
    pub trials: u64,
    pub successes: u64,
    pub seed: u64,
}

/// Runs trials `0..trials` on the global rayon pool.
pub fn monte_carlo(spec: &ModelSpec, trials: u64, seed: u64, level: f64) -> Result<EstimateWithCI> {
    let sampler = Sampler::new(spec)?;
    if trials == 0 {
        return Err(invalid("monte_carlo needs at least one trial"));
    }
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&i| sampler.is_zero(seed, i))
        .count() as u64;
    finish(successes, trials, seed, level)
}

/// [`monte_carlo`] on a dedicated pool of `workers` threads. The result does
/// not depend on `workers`.
pub fn monte_carlo_with_workers(
    spec: &ModelSpec,
    trials: u64,
    seed: u64,
    level: f64,
    workers: usize,
) -> Result<EstimateWithCI> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| monte_carlo(spec, trials, seed, level))
}

fn finish(successes: u64, trials: u64, seed: u64, level: f64) -> Result<EstimateWithCI> {
    let ci = clopper_pearson(successes, trials, level)?;
    Ok(EstimateWithCI {
        estimate: successes as f64 / trials as f64,
        ci,
        trials,
        successes,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_event() {
        let spec = ModelSpec::Ustat { n: 10, k: 2, p: 0.0 };
        let e = monte_carlo(&spec, 100, 1, 0.95).unwrap();
        assert_eq!(e.estimate, 1.0);
        assert_eq!(e.ci.upper, 1.0);
        assert!(e.ci.lower <= e.estimate && e.estimate <= e.ci.upper);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let spec = ModelSpec::Runs { n: 30, k: 3, p: 0.4, linear: false };
        let one = monte_carlo_with_workers(&spec, 20_000, 5, 0.95, 1).unwrap();
        let many = monte_carlo_with_workers(&spec, 20_000, 5, 0.95, 7).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn rejects_zero_trials() {
        let spec = ModelSpec::Ustat { n: 10, k: 2, p: 0.5 };
        assert!(monte_carlo(&spec, 0, 1, 0.95).is_err());
    }
}
