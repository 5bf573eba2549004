use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

/// A nonnegative quantity stored as its natural logarithm.
///
/// Bound values can exceed one, so the log may be positive. `-inf` is exact
/// zero. NaN and `+inf` are never stored.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    /// Wraps a log value.
    ///
    /// Panics on NaN or `+inf`; both indicate an arithmetic bug upstream.
    pub fn from_log(log_value: f64) -> Self {
        assert!(
            !log_value.is_nan() && log_value != f64::INFINITY,
            "LogProb cannot hold {log_value}"
        );
        LogProb(log_value)
    }

    /// Fallible variant of [`LogProb::from_log`].
    pub fn try_from_log(log_value: f64) -> Option<Self> {
        (!log_value.is_nan() && log_value != f64::INFINITY).then_some(LogProb(log_value))
    }

    /// Panics if `value` is negative or NaN.
    pub fn from_linear(value: f64) -> Self {
        assert!(value >= 0.0, "LogProb::from_linear needs a nonnegative value, got {value}");
        LogProb::from_log(value.ln())
    }

    pub fn log_value(self) -> f64 {
        self.0
    }

    pub fn linear(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `value^k` for a real exponent `k >= 0`. `0^0` is taken as 1.
    pub fn pow(self, k: f64) -> Self {
        if k == 0.0 {
            LogProb::ONE
        } else {
            LogProb::from_log(self.0 * k)
        }
    }

    /// `1 - value` for a value in `[0, 1]`, accurate when the value is tiny
    /// or close to one.
    pub fn complement(self) -> Self {
        if self.0 >= 0.0 {
            return LogProb::ZERO;
        }
        LogProb::from_log(log1m_exp(self.0))
    }

    pub fn max(self, other: Self) -> Self {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }
}

/// `ln(e^a + e^b)` without overflow or underflow.
pub fn log_add(a: LogProb, b: LogProb) -> LogProb {
    let (hi, lo) = if a.0 >= b.0 { (a.0, b.0) } else { (b.0, a.0) };
    if lo == f64::NEG_INFINITY {
        return LogProb(hi);
    }
    LogProb::from_log(hi + (lo - hi).exp().ln_1p())
}

/// `ln(sum e^{x_i})` over an iterator; empty input gives zero.
pub fn log_sum_exp<I: IntoIterator<Item = LogProb>>(terms: I) -> LogProb {
    let terms: Vec<f64> = terms.into_iter().map(LogProb::log_value).collect();
    let hi = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return LogProb::ZERO;
    }
    let sum: f64 = terms.iter().map(|&x| (x - hi).exp()).sum();
    LogProb::from_log(hi + sum.ln())
}

/// `ln(1 - e^x)` for `x <= 0`.
pub fn log1m_exp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

impl Add for LogProb {
    type Output = LogProb;

    fn add(self, rhs: LogProb) -> LogProb {
        log_add(self, rhs)
    }
}

impl Mul for LogProb {
    type Output = LogProb;

    fn mul(self, rhs: LogProb) -> LogProb {
        if self.is_zero() || rhs.is_zero() {
            return LogProb::ZERO;
        }
        LogProb::from_log(self.0 + rhs.0)
    }
}

impl PartialOrd for LogProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Debug for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogProb(ln={})", self.0)
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}
