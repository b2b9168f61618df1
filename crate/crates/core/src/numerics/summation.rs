use std::collections::VecDeque;

use super::hpreal::{EvalContext, HPReal};
use crate::error::{Error, Result};

/// Number of recent term ratios used to estimate the local decay rate.
pub const RATIO_WINDOW: usize = 8;
/// Ratios at or above this count as "not decaying".
pub const SLOW_RATIO: f64 = 0.999;
/// Consecutive slow terms tolerated before giving up.
pub const SLOW_RUN_LIMIT: usize = 10_000;
/// Hard cap on the number of terms.
pub const MAX_TERMS: usize = 2_000_000;

/// A value together with an estimate of its absolute error from
/// truncation.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: HPReal,
    pub bound: HPReal,
    pub terms: usize,
}

impl Approx {
    pub fn exact(value: HPReal) -> Self {
        let bound = HPReal::zero(value.digits());
        Approx { value, bound, terms: 0 }
    }
}

/// Sums `term(0) + term(1) + ...` until the terms and the geometric tail
/// estimate fall below `10^-(D + g/2)`.
///
/// The decay rate `r` is the largest of the last [`RATIO_WINDOW`] term
/// ratios; the returned bound is `|t_n| r / (1 - r)` for the last term
/// added. Terms are requested in increasing index order exactly once.
pub fn sum_until<F>(mut term: F, ctx: &EvalContext) -> Result<Approx>
where
    F: FnMut(usize) -> Result<HPReal>,
{
    let wd = ctx.working_digits();
    let threshold = -((ctx.target_digits + ctx.guard_digits / 2) as f64);
    let mut sum = HPReal::zero(wd);
    let mut ratios: VecDeque<f64> = VecDeque::with_capacity(RATIO_WINDOW);
    let mut prev_log: Option<f64> = None;
    let mut slow_run = 0usize;

    for n in 0..MAX_TERMS {
        let t = term(n)?;
        let log_t = t.log10_abs();
        sum = &sum + &t;

        if let Some(prev) = prev_log {
            let ratio = match (prev.is_finite(), log_t.is_finite()) {
                (_, false) => 0.0,
                (false, true) => f64::INFINITY,
                (true, true) => 10f64.powf(log_t - prev),
            };
            if ratios.len() == RATIO_WINDOW {
                ratios.pop_front();
            }
            ratios.push_back(ratio);
        }
        prev_log = Some(log_t);

        if ratios.len() < RATIO_WINDOW {
            continue;
        }
        let r = ratios.iter().copied().fold(0.0, f64::max);
        if r >= SLOW_RATIO {
            slow_run += 1;
            if slow_run >= SLOW_RUN_LIMIT {
                return Err(Error::InsufficientDecay { terms: slow_run });
            }
            continue;
        }
        slow_run = 0;
        if log_t >= threshold {
            continue;
        }
        let tail_factor = r / (1.0 - r);
        let tail_log = log_t + tail_factor.log10();
        if tail_factor == 0.0 || tail_log < threshold {
            let bound = if tail_factor == 0.0 {
                HPReal::zero(wd)
            } else {
                &t.abs() * &HPReal::from_f64(tail_factor, wd)
            };
            return Ok(Approx { value: sum, bound, terms: n + 1 });
        }
    }
    Err(Error::PrecisionBudget(format!("series not converged after {MAX_TERMS} terms")))
}
