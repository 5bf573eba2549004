use statrs::function::gamma::ln_gamma;

use super::LogProb;

/// Largest `n` for which [`log_binom`] uses exact integer arithmetic.
pub const EXACT_BINOM_LIMIT: u64 = 60;

/// `ln C(n, k)`; zero (`-inf`) when `k < 0` or `k > n`.
pub fn log_binom(n: u64, k: i64) -> LogProb {
    if k < 0 || k as u64 > n {
        return LogProb::ZERO;
    }
    let k = k as u64;
    if n < EXACT_BINOM_LIMIT {
        // Fits in u64 for every n below the limit.
        let exact = binom_exact(n, k).expect("C(n,k) fits in u128 for n < 60");
        return LogProb::from_log((exact as f64).ln());
    }
    log_binom_gamma(n, k)
}

/// Log-gamma route for `ln C(n, k)`, valid for all `0 <= k <= n`.
pub fn log_binom_gamma(n: u64, k: u64) -> LogProb {
    let k = k.min(n - k);
    if k == 0 {
        return LogProb::ONE;
    }
    let (n, k) = (n as f64, k as f64);
    LogProb::from_log(ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0))
}

/// `C(n, k)` as an exact integer, `None` on overflow. Returns 0 for `k > n`.
pub fn binom_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` as `f64`, zero outside the valid range.
pub fn binom_f64(n: u64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    match binom_exact(n, k as u64) {
        Some(c) => c as f64,
        None => log_binom(n, k).linear(),
    }
}
