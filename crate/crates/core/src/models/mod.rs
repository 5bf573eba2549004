//! The four built-in indicator families: `k`-runs, triangles in `G(n,p)`,
//! complete U-statistics, and uncovered edges of a random hypergraph cover.
//!
//! Each family yields a [`FamilySummary`] in two variants. `FirstPrinciples`
//! counts every correlated pair exactly. `PaperAsPrinted` reproduces the
//! closed forms commonly quoted for these examples, which use one-sided
//! neighbour counts and replace the covariance sum by `delta`.

mod hypergraph;
mod runs;
mod sample;
mod subsets;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{FamilySummary, ModelSpec};

pub(crate) use hypergraph::big_ratio;
pub use hypergraph::{
    hypergraph_edge_prob, hypergraph_joint_probs, hypergraph_pair_covariances, hypergraph_summary,
    JointProbs, PairCovariances,
};
pub use runs::{
    runs_log_correction_ceiling, runs_poisson_band, runs_summary, runs_summary_linear, PoissonBand,
};
pub use sample::{sample_is_zero, trial_rng, Sampler};
pub use subsets::{triangles_summary, ustat_summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    #[default]
    FirstPrinciples,
    PaperAsPrinted,
}

impl FormulaVariant {
    pub fn tag(self) -> &'static str {
        match self {
            FormulaVariant::FirstPrinciples => "first-principles",
            FormulaVariant::PaperAsPrinted => "paper-as-printed",
        }
    }
}

/// The summary of `spec` under `variant`.
pub fn summary(spec: &ModelSpec, variant: FormulaVariant) -> Result<FamilySummary> {
    spec.check()?;
    match *spec {
        ModelSpec::Runs { n, k, p, linear: false } => runs_summary(n, k, p, variant),
        ModelSpec::Runs { n, k, p, linear: true } => runs_summary_linear(n, k, p),
        ModelSpec::Triangles { n, p } => triangles_summary(n, p, variant),
        ModelSpec::Ustat { n, k, p } => ustat_summary(n, k, p, variant),
        ModelSpec::HypergraphCover { big_n, k, n_draws } => hypergraph_summary(big_n, k, n_draws),
    }
}
