//! One-dimensional minimization over a positive parameter.
//!
//! The objectives minimized here (log of a decreasing term plus an
//! increasing term) are not guaranteed unimodal, so the search evaluates a
//! log-spaced grid first and then runs golden-section refinement inside
//! the bracket around the best grid point. The returned value is never
//! worse than the best grid value.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_REFINE_ITERS: usize = 200;

/// Grid-then-golden-section minimizer on `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSearch {
    pub t_min: f64,
    pub t_max: f64,
    pub grid_points: usize,
    /// Refinement stops when the bracket width falls below this fraction of
    /// its midpoint.
    pub refine_tolerance: f64,
}

impl Default for ScalarSearch {
    fn default() -> Self {
        ScalarSearch {
            t_min: 1e-12,
            t_max: 50.0,
            grid_points: 200,
            refine_tolerance: 1e-10,
        }
    }
}

/// Result of a minimization: the argmin and the objective there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub t: f64,
    pub value: f64,
}

impl ScalarSearch {
    /// The log-spaced evaluation grid, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = (self.t_min.ln(), self.t_max.ln());
        let last = (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|g| {
                if g == 0 {
                    self.t_min
                } else if g + 1 == self.grid_points {
                    self.t_max
                } else {
                    (lo + (hi - lo) * g as f64 / last).exp()
                }
            })
            .collect()
    }

    /// Minimizes `objective`, a function returning a log-domain value.
    ///
    /// NaN and `+inf` count as non-finite; more than half the grid being
    /// non-finite is an error.
    pub fn minimize<F>(&self, objective: F) -> Result<Minimum>
    where
        F: Fn(f64) -> f64,
    {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "search interval must satisfy 0 < t_min < t_max < inf, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be >= 2, got {}",
                self.grid_points
            )));
        }

        let eval = |t: f64| {
            let v = objective(t);
            if v.is_nan() || v == f64::INFINITY {
                None
            } else {
                Some(v)
            }
        };

        let grid = self.grid();
        let values: Vec<Option<f64>> = grid.iter().map(|&t| eval(t)).collect();
        let non_finite = values.iter().filter(|v| v.is_none()).count();
        if 2 * non_finite > grid.len() {
            return Err(Error::IllPosedObjective {
                non_finite,
                total: grid.len(),
            });
        }

        let (best_idx, best_value) = values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least half the grid is finite");
        let mut best = Minimum {
            t: grid[best_idx],
            value: best_value,
        };

        // Golden-section in log(t) inside the neighbouring grid cells.
        let mut a = grid[best_idx.saturating_sub(1)].ln();
        let mut b = grid[(best_idx + 1).min(grid.len() - 1)].ln();
        let score = |u: f64| {
            let t = u.exp();
            (t, eval(t).unwrap_or(f64::INFINITY))
        };
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (mut tc, mut fc) = score(c);
        let (mut td, mut fd) = score(d);
        for _ in 0..MAX_REFINE_ITERS {
            for (t, f) in [(tc, fc), (td, fd)] {
                if f < best.value {
                    best = Minimum { t, value: f };
                }
            }
            let (ta, tb) = (a.exp(), b.exp());
            if tb - ta <= self.refine_tolerance * 0.5 * (ta + tb) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                (td, fd) = (tc, fc);
                c = b - INV_PHI * (b - a);
                (tc, fc) = score(c);
            } else {
                a = c;
                c = d;
                (tc, fc) = (td, fd);
                d = a + INV_PHI * (b - a);
                (td, fd) = score(d);
            }
        }
        for (t, f) in [(tc, fc), (td, fd)] {
            if f < best.value {
                best = Minimum { t, value: f };
            }
        }
        Ok(best)
    }
}

/// Free-function form of [`ScalarSearch::minimize`].
pub fn minimize_scalar<F>(
    objective: F,
    t_min: f64,
    t_max: f64,
    grid_points: usize,
    refine_tolerance: f64,
) -> Result<Minimum>
where
    F: Fn(f64) -> f64,
{
    ScalarSearch {
        t_min,
        t_max,
        grid_points,
        refine_tolerance,
    }
    .minimize(objective)
}
