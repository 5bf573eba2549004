//! Numerical check of the moment-generating-function gap bound
//! `|E e^{t sum X_i} - prod E e^{t X_i}| <= t^2 e^{m t kappa} sum_{i<j} Cov(X_i, X_j)`
//! on explicit joint laws of `m` binary variables.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};

/// Largest number of variables an explicit joint law may have.
pub const MAX_JOINT_VARS: usize = 20;

/// Joint law of `vars` binary variables; `probs[mask]` is the probability
/// that exactly the variables in `mask` equal one.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLaw {
    vars: usize,
    probs: Vec<f64>,
}

impl JointLaw {
    pub fn new(vars: usize, probs: Vec<f64>) -> Result<Self> {
        if vars == 0 || vars > MAX_JOINT_VARS {
            return Err(invalid(format!(
                "joint law needs 1..={MAX_JOINT_VARS} variables, got {vars}"
            )));
        }
        if probs.len() != 1 << vars {
            return Err(invalid(format!(
                "joint law over {vars} variables needs {} atoms, got {}",
                1usize << vars,
                probs.len()
            )));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(invalid("joint law has a negative or NaN atom"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("joint law sums to {total}, not 1")));
        }
        Ok(JointLaw { vars, probs })
    }

    /// Law of `outputs(bits)` where `bits` are independent with
    /// `P(bit j = 1) = bit_probs[j]`. `outputs` returns an `out_vars`-bit mask.
    pub fn induced(bit_probs: &[f64], out_vars: usize, outputs: impl Fn(u64) -> u64) -> Result<Self> {
        let b = bit_probs.len();
        if b > 24 {
            return Err(invalid(format!("at most 24 source bits, got {b}")));
        }
        let mut probs = vec![0.0; 1 << out_vars];
        for bits in 0u64..1 << b {
            let w: f64 = bit_probs
                .iter()
                .enumerate()
                .map(|(j, &q)| if bits >> j & 1 == 1 { q } else { 1.0 - q })
                .product();
            probs[outputs(bits) as usize] += w;
        }
        JointLaw::new(out_vars, probs)
    }

    /// The `n` circular `k`-run indicators of a Bernoulli(`p`) string.
    pub fn circular_runs(n: usize, k: usize, p: f64) -> Result<Self> {
        JointLaw::induced(&vec![p; n], n, |bits| {
            (0..n)
                .filter(|&i| (0..k).all(|j| bits >> ((i + j) % n) & 1 == 1))
                .fold(0, |m, i| m | 1 << i)
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.vars)
            .map(|i| {
                self.probs
                    .iter()
                    .enumerate()
                    .filter(|(mask, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p)
                    .sum()
            })
            .collect()
    }

    /// `sum_{i<j} Cov(X_i, X_j)`.
    pub fn cov_sum(&self) -> f64 {
        let means = self.means();
        let mut total = 0.0;
        for i in 0..self.vars {
            for j in i + 1..self.vars {
                let both = (1usize << i) | (1 << j);
                let joint: f64 = self
                    .probs
                    .iter()
                    .enumerate()
                    .filter(|(mask, _)| mask & both == both)
                    .map(|(_, p)| p)
                    .sum();
                total += joint - means[i] * means[j];
            }
        }
        total
    }
}

/// Both sides of the gap inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MgfGap {
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Evaluates both sides of the gap inequality exactly over the `2^m` atoms.
pub fn mgf_gap_check(law: &JointLaw, t: f64, kappa: f64) -> Result<MgfGap> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    if !(kappa >= 1.0) {
        return Err(invalid(format!(
            "indicators reach 1, so kappa must be >= 1, got {kappa}"
        )));
    }
    let joint_mgf: f64 = law
        .probs
        .iter()
        .enumerate()
        .map(|(mask, p)| p * (t * mask.count_ones() as f64).exp())
        .sum();
    let product: f64 = law
        .means()
        .iter()
        .map(|&p| 1.0 - p + p * t.exp())
        .product();
    let gap = (joint_mgf - product).abs();
    let bound = t * t * (law.vars as f64 * t * kappa).exp() * law.cov_sum();
    // Both MGFs are of order e^{mt}; allow rounding at that scale.
    let slack = 1e-12 * joint_mgf.max(product).max(1.0);
    Ok(MgfGap {
        gap,
        bound,
        holds: gap <= bound + slack,
    })
}

/// A random monotone Boolean function of `bits` inputs, as a DNF whose
/// terms are bit masks. The empty DNF is constant zero.
fn random_monotone_dnf<R: Rng>(rng: &mut R, bits: usize) -> Vec<u64> {
    let terms = rng.random_range(1..=3);
    (0..terms)
        .map(|_| {
            let size = rng.random_range(1..=bits.min(3));
            let mut mask = 0u64;
            while (mask.count_ones() as usize) < size {
                mask |= 1 << rng.random_range(0..bits);
            }
            mask
        })
        .collect()
}

/// A random positively associated law on `vars` indicators: each indicator
/// is a monotone function of `bits` independent Bernoulli coins.
pub fn random_monotone_law<R: Rng>(rng: &mut R, vars: usize, bits: usize) -> Result<JointLaw> {
    if bits == 0 || bits > 10 {
        return Err(invalid(format!("source bits must be in 1..=10, got {bits}")));
    }
    let bit_probs: Vec<f64> = (0..bits).map(|_| rng.random_range(0.05..0.95)).collect();
    let dnfs: Vec<Vec<u64>> = (0..vars).map(|_| random_monotone_dnf(rng, bits)).collect();
    JointLaw::induced(&bit_probs, vars, |b| {
        dnfs.iter()
            .enumerate()
            .filter(|(_, dnf)| dnf.iter().any(|&term| term & !b == 0))
            .fold(0, |m, (i, _)| m | 1 << i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn independent_law_has_no_gap() {
        let law = JointLaw::induced(&[0.3, 0.6, 0.1], 3, |b| b).unwrap();
        let r = mgf_gap_check(&law, 0.7, 1.0).unwrap();
        assert!(r.gap < 1e-14);
        assert!(r.bound.abs() < 1e-14);
        assert!(r.holds);
    }

    #[test]
    fn comonotone_pair() {
        // X1 = X2 ~ Bernoulli(0.3)
        let law = JointLaw::new(2, vec![0.7, 0.0, 0.0, 0.3]).unwrap();
        let r = mgf_gap_check(&law, 1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let gap = ((0.7 + 0.3 * e * e) - (0.7 + 0.3 * e).powi(2)).abs();
        assert!((r.gap - gap).abs() < 1e-14);
        assert!((r.gap - 0.620_023_412_822_638).abs() < 1e-12);
        assert!((r.bound - e * e * 0.21).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn runs_law_holds() {
        let law = JointLaw::circular_runs(6, 2, 0.5).unwrap();
        assert!((law.means()[0] - 0.25).abs() < 1e-15);
        let r = mgf_gap_check(&law, 0.5, 1.0).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn rejects_bad_laws() {
        assert!(JointLaw::new(2, vec![0.5, 0.0, 0.0, 0.3]).is_err());
        assert!(JointLaw::new(2, vec![0.5, 0.5]).is_err());
        assert!(JointLaw::new(1, vec![1.2, -0.2]).is_err());
        let law = JointLaw::new(1, vec![0.5, 0.5]).unwrap();
        assert!(mgf_gap_check(&law, 0.0, 1.0).is_err());
        assert!(mgf_gap_check(&law, 1.0, 0.5).is_err());
    }

    #[test]
    fn single_variable_has_no_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let law = random_monotone_law(&mut rng, 1, 4).unwrap();
            let r = mgf_gap_check(&law, 1.3, 1.0).unwrap();
            assert!(r.gap < 1e-13 && r.holds);
        }
    }

    #[test]
    fn monotone_laws_have_nonnegative_covariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let law = random_monotone_law(&mut rng, 4, 6).unwrap();
            assert!(law.cov_sum() >= -1e-15);
        }
    }
}
