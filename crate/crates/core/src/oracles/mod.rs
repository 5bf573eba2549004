//! Ground truth for the bounds: exact `P(Z = 0)` per model, a Monte Carlo
//! driver, and a checker for the moment-generating-function gap lemma.

mod exact;
mod lemma;
mod mc;

pub use exact::{
    cover_all_exact, runs_zero_exact, runs_zero_exact_linear, triangle_free_counts,
    triangle_free_exact, ustat_zero_exact, CoverTable, COVER_ORACLE_MAX_N, TRIANGLE_ORACLE_MAX_N,
};
pub use lemma::{mgf_gap_check, random_monotone_law, JointLaw, MgfGap, MAX_JOINT_VARS};
pub use mc::{monte_carlo, monte_carlo_with_workers, EstimateWithCI};

use crate::error::{Error, Result};
use crate::family::ModelSpec;
use crate::numerics::LogProb;

/// Exact `P(Z = 0)` for `spec`, or an `OracleRange` error when the instance
/// is too large to enumerate.
pub fn exact_zero_prob(spec: &ModelSpec) -> Result<LogProb> {
    spec.check()?;
    match *spec {
        ModelSpec::Runs { n, k, p, linear: false } => runs_zero_exact(n, k, p),
        ModelSpec::Runs { n, k, p, linear: true } => runs_zero_exact_linear(n, k, p),
        ModelSpec::Ustat { n, k, p } => ustat_zero_exact(n, k, p),
        ModelSpec::Triangles { n, p } => triangle_free_exact(n, p),
        ModelSpec::HypergraphCover { big_n, k, n_draws } => {
            if big_n > COVER_ORACLE_MAX_N {
                return Err(Error::OracleRange(format!(
                    "cover_all_exact needs N <= {COVER_ORACLE_MAX_N}, got {big_n}"
                )));
            }
            cover_all_exact(big_n, k, n_draws)
        }
    }
}
