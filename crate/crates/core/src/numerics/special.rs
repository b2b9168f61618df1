use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use super::hpreal::{EvalContext, HPReal};
use super::summation::{sum_until, Approx};
use crate::error::{Error, Result};
use crate::exact::BigRat;

static BERNOULLI: Mutex<Vec<BigRat>> = Mutex::new(Vec::new());

/// Bernoulli number `B_m` (with `B_1 = -1/2`), memoised.
pub fn bernoulli(m: usize) -> BigRat {
    let mut table = BERNOULLI.lock().unwrap();
    while table.len() <= m {
        let n = table.len();
        let value = if n == 0 {
            BigRat::from_integer(1.into())
        } else {
            let acc = (0..n).fold(BigRat::zero(), |acc, j| {
                acc + BigRat::from_integer(binomial(BigInt::from(n + 1), BigInt::from(j))) * &table[j]
            });
            -acc / BigRat::from_integer(BigInt::from(n + 1))
        };
        table.push(value);
    }
    table[m].clone()
}

/// Trigamma `psi'(k)` for `k > 0`, with the first omitted asymptotic term
/// as error bound.
///
/// The recurrence `psi'(k) = psi'(k+1) + 1/k^2` lifts the argument to
/// `z >= max(10, D+g)`, where the asymptotic expansion
/// `1/z + 1/(2z^2) + sum_j B_2j / z^(2j+1)` converges far past the working
/// precision before it starts to diverge.
pub fn trigamma_bounded(k: &HPReal, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    if !k.is_positive() {
        return Err(Error::Domain(format!("trigamma needs k > 0, got {}", k.to_decimal_string(10))));
    }
    let k = k.with_digits(wd.max(k.digits()));
    let z_min = 10f64.max(wd as f64).max(0.4 * ctx.target_digits as f64);
    let shifts = (z_min - k.to_f64()).ceil().max(0.0) as i64;

    let one = HPReal::one(wd);
    let mut acc = HPReal::zero(wd);
    for j in 0..shifts {
        let x = &k + j;
        acc = &acc + &(&one / &x.square());
    }
    let z = &k + shifts;
    let z2 = z.square();
    let inv_z = &one / &z;
    acc = &acc + &inv_z;
    acc = &acc + &(&one / &z2).mul_pow2(-1);

    let cutoff = -(wd as f64) - 2.0;
    let mut zpow = &inv_z / &z2; // 1 / z^(2j+1) for j = 1
    let mut prev_log = f64::INFINITY;
    for j in 1usize.. {
        let term = &HPReal::from_rat(&bernoulli(2 * j), wd) * &zpow;
        let log_t = term.log10_abs();
        if log_t < cutoff {
            return Ok(Approx { value: acc, bound: term.abs(), terms: j });
        }
        if log_t > prev_log {
            // expansion started diverging before reaching the precision
            return Err(Error::PrecisionBudget("trigamma asymptotic expansion diverged".into()));
        }
        prev_log = log_t;
        acc = &acc + &term;
        zpow = &zpow / &z2;
    }
    unreachable!()
}

pub fn trigamma_num(k: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    trigamma_bounded(k, ctx).map(|a| a.value)
}

/// Apery's constant from `zeta(3) = 5/2 sum_{n>=1} (-1)^(n+1) / (n^3 C(2n,n))`.
pub fn zeta3_bounded(ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    // t_1 = 1/2; t_{n+1}/t_n = -n^3 / (2 (n+1)^2 (2n+1))
    let mut t = HPReal::one(wd).mul_pow2(-1);
    let s = sum_until(
        |i| {
            if i > 0 {
                let n = i as i64;
                t = &(&t * -(n * n * n)) / (2 * (n + 1) * (n + 1) * (2 * n + 1));
            }
            Ok(t.clone())
        },
        ctx,
    )?;
    let five_halves = HPReal::from_i64(5, wd).mul_pow2(-1);
    Ok(Approx { value: &s.value * &five_halves, bound: &s.bound * &five_halves, terms: s.terms })
}

pub fn zeta3_num(ctx: &EvalContext) -> Result<HPReal> {
    zeta3_bounded(ctx).map(|a| a.value)
}
