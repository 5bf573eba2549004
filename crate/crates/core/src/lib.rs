//! Exponential upper bounds for `P(X = 0)` where `X` is a sum of positively
//! associated indicators.
//!
//! The crate computes the classical Janson, Boppona–Spencer and
//! Boutsikas–Koutras bounds together with an exponential Markov bound whose
//! covariance term carries a `t^2` factor, optimizes the free parameter `t`,
//! and checks every bound against exact oracles and Monte Carlo estimates
//! on four example families.
//!
//! ```
//! use posbound::{bounds, models, oracles, FormulaVariant, ModelSpec};
//!
//! let spec = ModelSpec::Ustat { n: 10, k: 2, p: 0.1 };
//! let summary = models::summary(&spec, FormulaVariant::FirstPrinciples).unwrap();
//! let truth = oracles::exact_zero_prob(&spec).unwrap();
//! let lv = bounds::lv_optimal(&summary).unwrap();
//! assert!(lv.value >= truth);
//! ```

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod family;
pub mod models;
pub mod numerics;
pub mod oracles;

pub use bounds::{BoundOutcome, BoundResult, Eq2Form, EvalOptions, Method, Tilt};
pub use error::{Error, Result};
pub use family::{FamilySummary, Means, ModelSpec, Violation};
pub use models::FormulaVariant;
pub use numerics::{ConfidenceInterval, LogProb};
pub use oracles::EstimateWithCI;
