//! Upper bounds on `P(X = 0)` evaluated from a [`FamilySummary`].
//!
//! | method              | value (log domain)                                          |
//! |---------------------|-------------------------------------------------------------|
//! | `janson-basic`      | `-lambda + delta`                                           |
//! | `janson-ratio`      | `-lambda / delta_bar^2` (printed) or `-lambda^2 / delta_bar` |
//! | `boppona-spencer`   | `delta / (1 - max p) + sum ln(1 - p_i)`                     |
//! | `boutsikas-koutras` | `ln(prod (1 - p_i) + cov_sum)`                              |
//! | `lv-general`        | `ln(prod (p_i e^{-t} + 1 - p_i) + t^2 cov_sum)`             |
//! | `lv-iid`            | same, homogeneous closed form                               |
//! | `independent-lower` | `sum ln(1 - p_i)`, a lower bound                            |
//!
//! Values above one are returned unclamped and flagged `vacuous`.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::FamilySummary;
use crate::numerics::{log_add, LogProb, ScalarSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    JansonBasic,
    JansonRatio,
    BopponaSpencer,
    BoutsikasKoutras,
    LvGeneral,
    LvIid,
    IndependentLower,
}

impl Method {
    /// Evaluation order of [`evaluate_all`].
    pub const ALL: [Method; 7] = [
        Method::JansonBasic,
        Method::JansonRatio,
        Method::BopponaSpencer,
        Method::BoutsikasKoutras,
        Method::LvGeneral,
        Method::LvIid,
        Method::IndependentLower,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::JansonBasic => "janson-basic",
            Method::JansonRatio => "janson-ratio",
            Method::BopponaSpencer => "boppona-spencer",
            Method::BoutsikasKoutras => "boutsikas-koutras",
            Method::LvGeneral => "lv-general",
            Method::LvIid => "lv-iid",
            Method::IndependentLower => "independent-lower",
        }
    }

    /// Everything except `independent-lower` bounds `P(X=0)` from above.
    pub fn is_upper(self) -> bool {
        self != Method::IndependentLower
    }
}

/// Which algebraic shape of the second Janson inequality to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq2Form {
    /// `exp(-lambda / delta_bar^2)`.
    #[default]
    Printed,
    /// `exp(-lambda^2 / delta_bar)`.
    Standard,
}

/// The free parameter `t > 0` of the exponential Markov bound.
///
/// `Log` carries `ln t` so that values like `t = e^{-1000}`, which underflow
/// as `f64`, keep an exact `t^2` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tilt {
    Linear(f64),
    Log(f64),
}

impl Tilt {
    pub fn ln(self) -> f64 {
        match self {
            Tilt::Linear(t) => t.ln(),
            Tilt::Log(l) => l,
        }
    }

    /// `t` itself; zero if it underflows.
    pub fn value(self) -> f64 {
        match self {
            Tilt::Linear(t) => t,
            Tilt::Log(l) => l.exp(),
        }
    }

    fn check(self) -> Result<()> {
        let ok = match self {
            Tilt::Linear(t) => t > 0.0 && t.is_finite(),
            Tilt::Log(l) => l.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition {
                method: "lv",
                reason: format!("t must be positive and finite, got {self:?}"),
            })
        }
    }
}

impl From<f64> for Tilt {
    fn from(t: f64) -> Self {
        Tilt::Linear(t)
    }
}

/// One evaluated bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub method: Method,
    pub value: LogProb,
    /// Present for `lv-*` methods only.
    pub t: Option<Tilt>,
    pub vacuous: bool,
}

impl BoundResult {
    fn new(method: Method, value: LogProb, t: Option<Tilt>) -> Self {
        BoundResult {
            method,
            value,
            t,
            vacuous: value.log_value() >= 0.0,
        }
    }

    pub fn linear(&self) -> f64 {
        self.value.linear()
    }
}

fn precondition(method: Method, reason: impl Into<String>) -> Error {
    Error::Precondition {
        method: method.tag(),
        reason: reason.into(),
    }
}

fn nonnegative_cov(s: &FamilySummary, method: Method) -> Result<LogProb> {
    if s.cov_sum < 0.0 {
        return Err(precondition(
            method,
            format!(
                "cov_sum = {:e} is negative; the indicators are not positively associated",
                s.cov_sum
            ),
        ));
    }
    Ok(if s.cov_sum == 0.0 {
        LogProb::ZERO
    } else {
        LogProb::from_log(s.cov_sum.ln())
    })
}

/// `P(X=0) <= exp(-lambda + delta)`.
pub fn janson_basic(s: &FamilySummary) -> BoundResult {
    BoundResult::new(
        Method::JansonBasic,
        LogProb::from_log(-s.lambda + s.delta),
        None,
    )
}

/// `P(X=0) <= exp(-lambda / delta_bar^2)`, or `exp(-lambda^2 / delta_bar)` in
/// the standard form.
pub fn janson_ratio(s: &FamilySummary, form: Eq2Form) -> Result<BoundResult> {
    if !(s.delta_bar > 0.0) {
        return Err(precondition(
            Method::JansonRatio,
            "delta_bar = 0 (empty expectation); the ratio is undefined",
        ));
    }
    let exponent = match form {
        Eq2Form::Printed => -s.lambda / (s.delta_bar * s.delta_bar),
        Eq2Form::Standard => -(s.lambda * s.lambda) / s.delta_bar,
    };
    Ok(BoundResult::new(
        Method::JansonRatio,
        LogProb::from_log(exponent),
        None,
    ))
}

/// `P(X=0) <= exp(delta / (1 - max p)) prod (1 - p_i)`.
pub fn boppona_spencer(s: &FamilySummary) -> Result<BoundResult> {
    if !(s.max_mean < 1.0) {
        return Err(precondition(
            Method::BopponaSpencer,
            format!("max_mean = {} must be < 1", s.max_mean),
        ));
    }
    let log = s.delta / (1.0 - s.max_mean) + s.log_independent_product();
    Ok(BoundResult::new(
        Method::BopponaSpencer,
        LogProb::from_log(log),
        None,
    ))
}

/// `P(X=0) <= prod P(X_i = 0) + sum_{i<j} Cov(X_i, X_j)`.
pub fn boutsikas_koutras(s: &FamilySummary) -> Result<BoundResult> {
    let cov = nonnegative_cov(s, Method::BoutsikasKoutras)?;
    let product = LogProb::from_log(s.log_independent_product());
    Ok(BoundResult::new(
        Method::BoutsikasKoutras,
        log_add(product, cov),
        None,
    ))
}

/// `ln(p e^{-t} + 1 - p)`, accurate for tiny and large `t`.
fn log_tilted_factor(p: f64, t: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if t < 1.0 {
        (p * (-t).exp_m1()).ln_1p()
    } else if p >= 1.0 {
        -t
    } else {
        log_add(
            LogProb::from_log((-p).ln_1p()),
            LogProb::from_log(p.ln() - t),
        )
        .log_value()
    }
}

/// The product term `e^{-t|I|} prod E[e^{t(1-X_i)}]` in log domain.
pub fn lv_product_term(s: &FamilySummary, t: Tilt) -> LogProb {
    let t = t.value();
    LogProb::from_log(s.sum_over_means(|p| log_tilted_factor(p, t)))
}

fn covariance_term(cov: LogProb, t: Tilt) -> LogProb {
    if cov.is_zero() {
        LogProb::ZERO
    } else {
        LogProb::from_log(2.0 * t.ln() + cov.log_value())
    }
}

/// The general exponential Markov bound at a fixed `t`.
///
/// The `e^{t|I|}` factor on the covariance term cancels against `e^{-t|I|}`,
/// leaving `prod (p_i e^{-t} + 1 - p_i) + t^2 cov_sum`.
pub fn lv_general(s: &FamilySummary, t: impl Into<Tilt>) -> Result<BoundResult> {
    let t = t.into();
    t.check()?;
    let cov = nonnegative_cov(s, Method::LvGeneral)?;
    let value = log_add(lv_product_term(s, t), covariance_term(cov, t));
    Ok(BoundResult::new(Method::LvGeneral, value, Some(t)))
}

/// Identically distributed form:
/// `(1-p)^{|I|} (1 + e^{-t} p/(1-p))^{|I|} + t^2 cov_sum`.
pub fn lv_iid(s: &FamilySummary, t: impl Into<Tilt>) -> Result<BoundResult> {
    let t = t.into();
    t.check()?;
    let p = s.common_mean().ok_or_else(|| {
        precondition(Method::LvIid, "summary has heterogeneous means")
    })?;
    if !(p < 1.0) {
        return Err(precondition(Method::LvIid, "p = 1"));
    }
    let cov = nonnegative_cov(s, Method::LvIid)?;
    let m = s.count as f64;
    let tv = t.value();
    let log_factor = if tv < 1.0 {
        // (1-p)(1 + e^{-t} p/(1-p)) = 1 - p(1 - e^{-t}); the factored logs
        // cancel to within eps/t here.
        (p * (-tv).exp_m1()).ln_1p()
    } else {
        (-p).ln_1p() + ((-tv).exp() * p / (1.0 - p)).ln_1p()
    };
    let product = m * log_factor;
    let value = log_add(LogProb::from_log(product), covariance_term(cov, t));
    Ok(BoundResult::new(Method::LvIid, value, Some(t)))
}

/// [`lv_general`] minimized over `t` with the default search.
pub fn lv_optimal(s: &FamilySummary) -> Result<BoundResult> {
    lv_optimal_with(s, &ScalarSearch::default())
}

pub fn lv_optimal_with(s: &FamilySummary, search: &ScalarSearch) -> Result<BoundResult> {
    nonnegative_cov(s, Method::LvGeneral)?;
    let best = search.minimize(|t| {
        lv_general(s, t)
            .map(|r| r.value.log_value())
            .unwrap_or(f64::NAN)
    })?;
    lv_general(s, best.t)
}

/// `P(X=0) >= prod P(X_i = 0)`, valid under positive association.
pub fn independent_lower(s: &FamilySummary) -> BoundResult {
    BoundResult::new(
        Method::IndependentLower,
        LogProb::from_log(s.log_independent_product()),
        None,
    )
}

/// Knobs for [`evaluate_all_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub eq2_form: Eq2Form,
    /// Fixed `t` for the `lv-*` bounds instead of optimizing.
    pub tilt: Option<Tilt>,
    pub search: ScalarSearch,
}

/// A bound that was either evaluated or skipped because its precondition
/// failed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundOutcome {
    pub method: Method,
    pub result: Option<BoundResult>,
    pub skipped_reason: Option<String>,
}

impl BoundOutcome {
    fn from_result(method: Method, r: Result<BoundResult>) -> Self {
        match r {
            Ok(res) => BoundOutcome {
                method,
                result: Some(res),
                skipped_reason: None,
            },
            Err(e) => BoundOutcome {
                method,
                result: None,
                skipped_reason: Some(e.to_string()),
            },
        }
    }
}

/// Linear values below this are written as `null`.
pub const LINEAR_FLOOR: f64 = 1e-300;

impl Serialize for BoundOutcome {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("BoundOutcome", 7)?;
        st.serialize_field("method", &self.method)?;
        let r = self.result.as_ref();
        let log_value = r.map(|r| r.value.log_value()).filter(|v| v.is_finite());
        let value = r.map(|r| r.linear()).filter(|v| v.is_finite() && *v >= LINEAR_FLOOR);
        st.serialize_field("log_value", &log_value)?;
        st.serialize_field("value", &value)?;
        st.serialize_field("t", &r.and_then(|r| r.t).map(Tilt::value))?;
        st.serialize_field("log_t", &r.and_then(|r| r.t).map(Tilt::ln))?;
        st.serialize_field("vacuous", &r.map(|r| r.vacuous))?;
        st.serialize_field("skipped_reason", &self.skipped_reason)?;
        st.end()
    }
}

/// Every bound with the default options.
pub fn evaluate_all(s: &FamilySummary) -> Vec<BoundOutcome> {
    evaluate_all_with(s, &EvalOptions::default())
}

/// Every bound in [`Method::ALL`] order; inapplicable bounds are skipped
/// with a reason.
pub fn evaluate_all_with(s: &FamilySummary, opts: &EvalOptions) -> Vec<BoundOutcome> {
    let lv = match opts.tilt {
        Some(t) => lv_general(s, t),
        None => lv_optimal_with(s, &opts.search),
    };
    let lv_t = lv.as_ref().ok().and_then(|r| r.t);
    let iid = match (lv_t, &lv) {
        (Some(t), _) => lv_iid(s, t),
        (None, Err(e)) => Err(precondition(Method::LvIid, e.to_string())),
        (None, Ok(_)) => unreachable!("lv results always carry t"),
    };
    vec![
        BoundOutcome::from_result(Method::JansonBasic, Ok(janson_basic(s))),
        BoundOutcome::from_result(Method::JansonRatio, janson_ratio(s, opts.eq2_form)),
        BoundOutcome::from_result(Method::BopponaSpencer, boppona_spencer(s)),
        BoundOutcome::from_result(Method::BoutsikasKoutras, boutsikas_koutras(s)),
        BoundOutcome::from_result(Method::LvGeneral, lv),
        BoundOutcome::from_result(Method::LvIid, iid),
        BoundOutcome::from_result(Method::IndependentLower, Ok(independent_lower(s))),
    ]
}
