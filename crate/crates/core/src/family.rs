//! Model-agnostic description of an indicator family.
//!
//! [`FamilySummary`] holds exactly the statistics the bounds consume. It is
//! also the JSON interchange format between CLI subcommands.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Success probabilities of the indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Means {
    /// Every indicator has the same mean.
    Homogeneous(f64),
    /// One mean per indicator.
    Heterogeneous(Vec<f64>),
}

/// Sufficient statistics of a family `(X_i)_{i in I}` of indicators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    /// `|I|`.
    pub count: u64,
    pub means: Means,
    /// `E X = sum p_i`.
    pub lambda: f64,
    /// Half the sum of `E(X_i X_j)` over ordered correlated pairs.
    pub delta: f64,
    /// `lambda + 2 delta`.
    pub delta_bar: f64,
    /// `sum_{i<j} Cov(X_i, X_j)`.
    pub cov_sum: f64,
    pub max_mean: f64,
}

/// One failed consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

impl FamilySummary {
    pub fn homogeneous(count: u64, p: f64, delta: f64, cov_sum: f64) -> Self {
        let lambda = count as f64 * p;
        FamilySummary {
            count,
            means: Means::Homogeneous(p),
            lambda,
            delta,
            delta_bar: lambda + 2.0 * delta,
            cov_sum,
            max_mean: p,
        }
    }

    pub fn heterogeneous(means: Vec<f64>, delta: f64, cov_sum: f64) -> Self {
        let lambda = means.iter().sum();
        let max_mean = means.iter().copied().fold(0.0, f64::max);
        FamilySummary {
            count: means.len() as u64,
            means: Means::Heterogeneous(means),
            lambda,
            delta,
            delta_bar: lambda + 2.0 * delta,
            cov_sum,
            max_mean,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The common mean, if the family is homogeneous.
    pub fn common_mean(&self) -> Option<f64> {
        match self.means {
            Means::Homogeneous(p) => Some(p),
            Means::Heterogeneous(_) => None,
        }
    }

    /// `sum_i f(p_i)`, exploiting homogeneity.
    pub fn sum_over_means(&self, f: impl Fn(f64) -> f64) -> f64 {
        match &self.means {
            Means::Homogeneous(p) => {
                if self.count == 0 {
                    0.0
                } else {
                    self.count as f64 * f(*p)
                }
            }
            Means::Heterogeneous(ps) => ps.iter().map(|&p| f(p)).sum(),
        }
    }

    /// `ln prod_i (1 - p_i)`.
    pub fn log_independent_product(&self) -> f64 {
        self.sum_over_means(|p| if p >= 1.0 { f64::NEG_INFINITY } else { (-p).ln_1p() })
    }

    /// Replaces `cov_sum` by `delta`, the substitution `sum Cov <= Delta`
    /// used when only expectations of products are available.
    pub fn with_cov_bounded_by_delta(mut self) -> Self {
        self.cov_sum = self.delta;
        self
    }

    /// Checks internal consistency. An empty list means the summary is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |invariant: &'static str, detail: String| {
            out.push(Violation { invariant, detail })
        };

        if self.count == 0 {
            push("count", "count must be positive".into());
        }
        let means: Vec<f64> = match &self.means {
            Means::Homogeneous(p) => vec![*p],
            Means::Heterogeneous(ps) => {
                if ps.len() as u64 != self.count {
                    push(
                        "means",
                        format!("{} means listed but count = {}", ps.len(), self.count),
                    );
                }
                ps.clone()
            }
        };
        for (i, &p) in means.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                push("means", format!("mean #{i} = {p} is outside [0,1]"));
            }
        }

        let sum = self.sum_over_means(|p| p);
        if !close(self.lambda, sum, 1e-10) && !(self.lambda == 0.0 && sum == 0.0) {
            push(
                "lambda",
                format!("lambda = {} but the means sum to {sum}", self.lambda),
            );
        }
        if !(self.delta >= 0.0) {
            push("delta", format!("delta = {} must be nonnegative", self.delta));
        }
        let expected_bar = self.lambda + 2.0 * self.delta;
        if !close(self.delta_bar, expected_bar, 1e-12) && !(expected_bar == 0.0 && self.delta_bar == 0.0) {
            push(
                "delta_bar",
                format!(
                    "delta_bar = {} but lambda + 2 delta = {expected_bar}",
                    self.delta_bar
                ),
            );
        }
        if !(self.cov_sum >= 0.0) {
            push(
                "cov_sum",
                format!(
                    "cov_sum = {} is negative; positively associated indicators have nonnegative covariances",
                    self.cov_sum
                ),
            );
        }
        if self.common_mean().is_some() && self.cov_sum > self.delta * (1.0 + 1e-12) + 1e-300 {
            push(
                "cov_sum",
                format!(
                    "cov_sum = {} exceeds delta = {} (each covariance is at most the joint expectation)",
                    self.cov_sum, self.delta
                ),
            );
        }
        let max = means.iter().copied().fold(0.0, f64::max);
        if self.max_mean != max {
            push(
                "max_mean",
                format!("max_mean = {} but the largest mean is {max}", self.max_mean),
            );
        }
        out
    }
}

/// One of the four built-in indicator families with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// Windows of `k` consecutive ones in a Bernoulli(`p`) string of length
    /// `n`; circular unless `linear` is set.
    Runs {
        n: u64,
        k: u64,
        p: f64,
        #[serde(default)]
        linear: bool,
    },
    /// Triangles in `G(n, p)`.
    Triangles { n: u64, p: f64 },
    /// Products over all `k`-subsets of `n` Bernoulli(`p`) variables.
    Ustat { n: u64, k: u64, p: f64 },
    /// Uncovered edges of `K_N` after `n_draws` uniform `K_k` draws.
    HypergraphCover {
        #[serde(rename = "N")]
        big_n: u64,
        k: u64,
        n_draws: u64,
    },
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("p must lie in [0,1], got {p}")))
    }
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Runs { .. } => "runs",
            ModelSpec::Triangles { .. } => "triangles",
            ModelSpec::Ustat { .. } => "ustat",
            ModelSpec::HypergraphCover { .. } => "hypergraph-cover",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        spec.check()?;
        Ok(spec)
    }

    /// Rejects parameters outside the model's valid region.
    pub fn check(&self) -> Result<()> {
        match *self {
            // n >= 2k is only needed for the closed-form summary; sampling and
            // the exact oracle accept any n >= 1.
            ModelSpec::Runs { n, k, p, .. } => {
                check_p(p)?;
                if k < 1 || n < 1 {
                    return Err(invalid(format!("runs: need n >= 1 and k >= 1, got n={n}, k={k}")));
                }
                Ok(())
            }
            ModelSpec::Triangles { n, p } => {
                check_p(p)?;
                if n < 3 {
                    return Err(invalid(format!("triangles: need n >= 3, got {n}")));
                }
                if n > 64 {
                    return Err(invalid(format!("triangles: n <= 64 supported, got {n}")));
                }
                Ok(())
            }
            ModelSpec::Ustat { n, k, p } => {
                check_p(p)?;
                if k < 1 || k > n {
                    return Err(invalid(format!("ustat: need 1 <= k <= n, got n={n}, k={k}")));
                }
                Ok(())
            }
            ModelSpec::HypergraphCover { big_n, k, n_draws } => {
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
        }
    }
}
