//! Comparison rows and their JSON and CSV renderings.

use posbound::bounds::{BoundOutcome, LINEAR_FLOOR};
use posbound::{EstimateWithCI, FamilySummary, FormulaVariant, LogProb, Method, ModelSpec};
use serde::Serialize;

/// One bound column group of a [`ComparisonRow`].
#[derive(Debug, Clone, Serialize)]
pub struct BoundCell {
    pub method: Method,
    pub value: Option<f64>,
    pub log_value: Option<f64>,
    pub vacuous: Option<bool>,
    pub log_t: Option<f64>,
    pub skipped_reason: Option<String>,
}

impl From<&BoundOutcome> for BoundCell {
    fn from(o: &BoundOutcome) -> Self {
        let r = o.result.as_ref();
        BoundCell {
            method: o.method,
            value: r.map(|r| r.linear()).filter(|v| *v >= LINEAR_FLOOR),
            log_value: r.map(|r| r.value.log_value()).filter(|v| v.is_finite()),
            vacuous: r.map(|r| r.vacuous),
            log_t: r.and_then(|r| r.t).map(|t| t.ln()),
            skipped_reason: o.skipped_reason.clone(),
        }
    }
}

/// One grid point of `compare`.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub model: &'static str,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub p: Option<f64>,
    #[serde(rename = "N")]
    pub big_n: Option<u64>,
    pub n_draws: Option<u64>,
    pub formula_variant: &'static str,
    pub lambda: f64,
    pub delta: f64,
    pub cov_sum: f64,
    pub exact: Option<f64>,
    pub exact_log: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_lower: Option<f64>,
    pub mc_upper: Option<f64>,
    pub bounds: Vec<BoundCell>,
    pub tightest_method: Option<Method>,
}

/// The non-vacuous upper bound with the smallest value, first in
/// [`Method::ALL`] order on ties.
pub fn tightest(outcomes: &[BoundOutcome]) -> Option<Method> {
    outcomes
        .iter()
        .filter(|o| o.method.is_upper())
        .filter_map(|o| o.result.as_ref())
        .filter(|r| !r.vacuous)
        .fold(None, |best: Option<(Method, LogProb)>, r| match best {
            Some((_, v)) if v <= r.value => best,
            _ => Some((r.method, r.value)),
        })
        .map(|(m, _)| m)
}

impl ComparisonRow {
    pub fn new(
        spec: &ModelSpec,
        variant: FormulaVariant,
        summary: &FamilySummary,
        outcomes: &[BoundOutcome],
        exact: Option<LogProb>,
        mc: Option<&EstimateWithCI>,
    ) -> Self {
        let (n, k, p, big_n, n_draws) = match *spec {
            ModelSpec::Runs { n, k, p, .. } | ModelSpec::Ustat { n, k, p } => {
                (Some(n), Some(k), Some(p), None, None)
            }
            ModelSpec::Triangles { n, p } => (Some(n), None, Some(p), None, None),
            ModelSpec::HypergraphCover { big_n, k, n_draws } => {
                (None, Some(k), None, Some(big_n), Some(n_draws))
            }
        };
        ComparisonRow {
            model: spec.name(),
            n,
            k,
            p,
            big_n,
            n_draws,
            formula_variant: variant.tag(),
            lambda: summary.lambda,
            delta: summary.delta,
            cov_sum: summary.cov_sum,
            exact: exact.map(LogProb::linear),
            exact_log: exact.map(LogProb::log_value).filter(|v| v.is_finite()),
            mc_estimate: mc.map(|e| e.estimate),
            mc_lower: mc.map(|e| e.ci.lower),
            mc_upper: mc.map(|e| e.ci.upper),
            bounds: outcomes.iter().map(BoundCell::from).collect(),
            tightest_method: tightest(outcomes),
        }
    }
}

/// Column names of the CSV table, in order.
pub fn csv_header() -> Vec<String> {
    let mut h: Vec<String> = [
        "model", "n", "k", "p", "N", "n_draws", "formula_variant", "lambda", "delta", "cov_sum",
        "exact", "exact_log", "mc_estimate", "mc_lower", "mc_upper",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for m in Method::ALL {
        let c = m.tag().replace('-', "_");
        h.push(c.clone());
        h.push(format!("{c}_log"));
        h.push(format!("{c}_vacuous"));
    }
    h.push("lv_log_t".into());
    h.push("tightest_method".into());
    h
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.16e}")
    }
}

fn opt_f(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn opt_u(x: Option<u64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ComparisonRow {
    pub fn csv_record(&self) -> Vec<String> {
        let mut r = vec![
            self.model.to_string(),
            opt_u(self.n),
            opt_u(self.k),
            opt_f(self.p),
            opt_u(self.big_n),
            opt_u(self.n_draws),
            self.formula_variant.to_string(),
            fmt_f64(self.lambda),
            fmt_f64(self.delta),
            fmt_f64(self.cov_sum),
            opt_f(self.exact),
            opt_f(self.exact_log),
            opt_f(self.mc_estimate),
            opt_f(self.mc_lower),
            opt_f(self.mc_upper),
        ];
        for m in Method::ALL {
            match self.bounds.iter().find(|b| b.method == m) {
                Some(b) => {
                    r.push(opt_f(b.value));
                    r.push(opt_f(b.log_value));
                    r.push(b.vacuous.map(|v| v.to_string()).unwrap_or_default());
                }
                None => r.extend([String::new(), String::new(), String::new()]),
            }
        }
        let lv_t = self
            .bounds
            .iter()
            .find(|b| b.method == Method::LvGeneral)
            .and_then(|b| b.log_t);
        r.push(opt_f(lv_t));
        r.push(self.tightest_method.map(|m| m.tag().to_string()).unwrap_or_default());
        r
    }
}
