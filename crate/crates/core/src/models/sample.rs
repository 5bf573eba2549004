//! One realization per `(seed, trial_index)`.
//!
//! Each trial owns a ChaCha8 stream keyed by the seed with the stream id set
//! to the trial index, so any schedule of trials across workers reproduces
//! the same outcomes.

use rand::distr::{Bernoulli, Distribution};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::family::ModelSpec;

/// The RNG for one trial.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// A prepared simulator for one [`ModelSpec`].
#[derive(Debug, Clone)]
pub enum Sampler {
    Runs { n: usize, k: usize, coin: Bernoulli, linear: bool },
    Triangles { n: usize, coin: Bernoulli },
    Ustat { n: usize, k: usize, coin: Bernoulli },
    Hypergraph { big_n: usize, k: usize, n_draws: u64, edge_index: Vec<usize>, edges: usize },
}

fn coin(p: f64) -> Bernoulli {
    Bernoulli::new(p).expect("p was validated to lie in [0,1]")
}

impl Sampler {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        spec.check()?;
        Ok(match *spec {
            ModelSpec::Runs { n, k, p, linear } => Sampler::Runs {
                n: n as usize,
                k: k as usize,
                coin: coin(p),
                linear,
            },
            ModelSpec::Triangles { n, p } => Sampler::Triangles {
                n: n as usize,
                coin: coin(p),
            },
            ModelSpec::Ustat { n, k, p } => Sampler::Ustat {
                n: n as usize,
                k: k as usize,
                coin: coin(p),
            },
            ModelSpec::HypergraphCover { big_n, k, n_draws } => {
                let big_n = big_n as usize;
                let mut edge_index = vec![usize::MAX; big_n * big_n];
                let mut e = 0;
                for a in 0..big_n {
                    for b in a + 1..big_n {
                        edge_index[a * big_n + b] = e;
                        edge_index[b * big_n + a] = e;
                        e += 1;
                    }
                }
                Sampler::Hypergraph {
                    big_n,
                    k: k as usize,
                    n_draws,
                    edge_index,
                    edges: e,
                }
            }
        })
    }

    /// Whether `Z = 0` in trial `trial_index`.
    pub fn is_zero(&self, seed: u64, trial_index: u64) -> bool {
        let mut rng = trial_rng(seed, trial_index);
        match self {
            Sampler::Runs { n, k, coin, linear } => {
                let (n, k) = (*n, *k);
                if *linear {
                    let mut run = 0;
                    for _ in 0..n {
                        if coin.sample(&mut rng) {
                            run += 1;
                            if run >= k {
                                return false;
                            }
                        } else {
                            run = 0;
                        }
                    }
                    return true;
                }
                // Circular: the leading run joins the trailing run.
                let mut leading = 0;
                let mut seen_zero = false;
                let mut run = 0;
                for _ in 0..n {
                    if coin.sample(&mut rng) {
                        run += 1;
                        if seen_zero && run >= k {
                            return false;
                        }
                    } else {
                        if !seen_zero {
                            leading = run;
                            seen_zero = true;
                        }
                        run = 0;
                    }
                }
                // All ones: every window is a run of ones.
                seen_zero && leading + run < k
            }
            Sampler::Triangles { n, coin } => {
                let n = *n;
                let mut adj = [0u64; 64];
                for a in 0..n {
                    for b in a + 1..n {
                        if coin.sample(&mut rng) {
                            adj[a] |= 1 << b;
                            adj[b] |= 1 << a;
                        }
                    }
                }
                for a in 0..n {
                    let mut higher = adj[a] & !((2u64 << a).wrapping_sub(1));
                    while higher != 0 {
                        let b = higher.trailing_zeros() as usize;
                        higher &= higher - 1;
                        if adj[a] & adj[b] != 0 {
                            return false;
                        }
                    }
                }
                true
            }
            Sampler::Ustat { n, k, coin } => {
                let mut ones = 0;
                for _ in 0..*n {
                    if coin.sample(&mut rng) {
                        ones += 1;
                        if ones >= *k {
                            return false;
                        }
                    }
                }
                true
            }
            Sampler::Hypergraph { big_n, k, n_draws, edge_index, edges } => {
                let mut covered = vec![0u64; edges.div_ceil(64)];
                let mut remaining = *edges;
                for _ in 0..*n_draws {
                    let picked = index::sample(&mut rng, *big_n, *k).into_vec();
                    for (i, &a) in picked.iter().enumerate() {
                        for &b in &picked[i + 1..] {
                            let e = edge_index[a * big_n + b];
                            let bit = 1u64 << (e % 64);
                            if covered[e / 64] & bit == 0 {
                                covered[e / 64] |= bit;
                                remaining -= 1;
                            }
                        }
                    }
                    if remaining == 0 {
                        return true;
                    }
                }
                false
            }
        }
    }
}

/// Simulates one realization of `spec` and reports whether `Z = 0`.
///
/// For `hypergraph-cover`, `Z = 0` is the event that every edge of `K_N`
/// is covered.
pub fn sample_is_zero(spec: &ModelSpec, rng_seed: u64, trial_index: u64) -> Result<bool> {
    Ok(Sampler::new(spec)?.is_zero(rng_seed, trial_index))
}
