//! Log-domain arithmetic, binomial coefficients, scalar minimization and
//! binomial confidence intervals.

mod combin;
mod interval;
mod logprob;
mod minimize;

pub use combin::{binom_exact, binom_f64, log_binom, log_binom_gamma, EXACT_BINOM_LIMIT};
pub use interval::{clopper_pearson, ConfidenceInterval};
pub use logprob::{log1m_exp, log_add, log_sum_exp, LogProb};
pub use minimize::{minimize_scalar, Minimum, ScalarSearch};
