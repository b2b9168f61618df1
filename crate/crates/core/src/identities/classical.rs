//! Classical (q = 1) sides: hypergeometric series with rational term
//! ratios, the trigamma identity and Apery's constant.

use crate::error::Result;
use crate::exact::BigRat;
use crate::numerics::{bernoulli, hp_constant_pi, sum_until, trigamma_bounded, zeta3_bounded, Approx, EvalContext, HPReal};

use super::Params;

/// `sum_n a_n w(n)` with `a_0 = 1` and `a_(n+1)/a_n = num(n)/den(n)`.
fn hyper_sum(ctx: &EvalContext, ratio: impl Fn(i64) -> (i64, i64), weight: impl Fn(i64) -> i64) -> Result<Approx> {
    let mut a = HPReal::one(ctx.working_digits());
    sum_until(
        |i| {
            let n = i as i64;
            if n > 0 {
                let (num, den) = ratio(n - 1);
                a = &(&a * num) / den;
            }
            Ok(&a * weight(n))
        },
        ctx,
    )
}

fn pi_squared_over_4(ctx: &EvalContext) -> HPReal {
    hp_constant_pi(ctx).square().mul_pow2(-2)
}

/// `sum (1/4)^n [(1)_n/(3/2)_n]^3 (3n+2)`.
pub fn guillera_lhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    hyper_sum(ctx, |n| ((2 * n + 2).pow(3), 4 * (2 * n + 3).pow(3)), |n| 3 * n + 2)
}

pub fn guillera_rhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    Ok(Approx::exact(pi_squared_over_4(ctx)))
}

/// `sum (1/4)^n [(1/2)_n/(1)_n]^3 (6n+1)`.
pub fn ramanujan_lhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    hyper_sum(ctx, |n| ((2 * n + 1).pow(3), 4 * (2 * n + 2).pow(3)), |n| 6 * n + 1)
}

pub fn ramanujan_rhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    Ok(Approx::exact(&HPReal::from_i64(4, ctx.working_digits()) / &hp_constant_pi(ctx)))
}

/// `sum (1/4)^n [(1)_n/(3/2)_n]^3 ((6n+4) O_(n+1) - 1)` with odd harmonic
/// numbers `O_m = 1 + 1/3 + ... + 1/(2m-1)`.
pub fn zeta3_harmonic_lhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let mut a = HPReal::one(wd);
    let mut odd = HPReal::one(wd);
    sum_until(
        |i| {
            let n = i as i64;
            if n > 0 {
                a = &(&a * (2 * n).pow(3)) / (4 * (2 * n + 1).pow(3));
                odd = &odd + &(&HPReal::one(wd) / (2 * n + 1));
            }
            Ok(&a * &(&(&odd * (6 * n + 4)) - &HPReal::one(wd)))
        },
        ctx,
    )
}

pub fn zeta3_harmonic_rhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    let z = zeta3_bounded(ctx)?;
    let scale = HPReal::from_i64(7, ctx.working_digits()).mul_pow2(-1);
    Ok(Approx { value: &z.value * &scale, bound: &z.bound * &scale, terms: z.terms })
}

fn sin_pi_k_sq_over_pi_sq(k: &HPReal, ctx: &EvalContext) -> HPReal {
    let pi = hp_constant_pi(ctx);
    (&(&pi * k).sin() / &pi).square()
}

/// Left side of the trigamma identity:
/// `1/2 sum (3n+3-2k) (1)_n^4 / ((1)_(k-1)^2 (1)_(2n+1) (1)_(n-k+1)^2)`.
///
/// The first term is `(3-2k) sin^2(pi k) / (2 pi^2 (1-k)^2)` by the
/// reflection formula; later terms follow from the rational ratio
/// `(n+1)^4 (3n+6-2k) / ((2n+2)(2n+3)(n+2-k)^2 (3n+3-2k))`.
pub fn trigamma_lhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let k = ctx.lift(p.k());
    let one_minus_k = &HPReal::one(wd) - &k;
    let mut t = &(&sin_pi_k_sq_over_pi_sq(&k, ctx) * &(&HPReal::from_i64(3, wd) - &k.mul_pow2(1)))
        / &one_minus_k.square().mul_pow2(1);
    sum_until(
        |i| {
            if i > 0 {
                let n = (i - 1) as i64;
                let lin = |c: i64| &HPReal::from_i64(c, wd) - &k.mul_pow2(1);
                let num = &lin(3 * n + 6) * (n + 1).pow(4);
                let shifted = &HPReal::from_i64(n + 2, wd) - &k;
                let den = &(&(&shifted.square() * &lin(3 * n + 3)) * (2 * n + 2)) * (2 * n + 3);
                t = &(&t * &num) / &den;
            }
            Ok(t.clone())
        },
        ctx,
    )
}

/// Right side `1 - psi'(k) sin^2(pi k) / pi^2`.
pub fn trigamma_rhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let k = ctx.lift(p.k());
    let psi = trigamma_bounded(&k, ctx)?;
    let s = sin_pi_k_sq_over_pi_sq(&k, ctx);
    Ok(Approx { value: &HPReal::one(ctx.working_digits()) - &(&psi.value * &s), bound: &psi.bound * &s, terms: psi.terms })
}

/// Middle expression `1 - sum_n 1/((1)_(-k-n)^2 (1)_(k+n)^2)`, summed
/// termwise as `sin^2(k pi)/(pi^2 (k+n)^2)` for `n < N` plus an
/// Euler-Maclaurin remainder for the tail.
pub fn trigamma_middle(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let k = ctx.lift(p.k());
    let c = sin_pi_k_sq_over_pi_sq(&k, ctx);
    let head_terms = 60.max(wd as i64);
    let mut sum = HPReal::zero(wd);
    for n in 0..head_terms {
        sum = &sum + &(&c / &(&k + n).square());
    }
    // sum_{n >= N} 1/(z + n)^2 with z = N + k
    let z = &k + head_terms;
    let z2 = z.square();
    let one = HPReal::one(wd);
    let mut tail = &(&one / &z) + &(&one / &z2).mul_pow2(-1);
    let mut zpow = &(&one / &z) / &z2;
    let cutoff = -(wd as f64) - 2.0;
    let mut last = HPReal::zero(wd);
    for j in 1usize..200 {
        let term = &HPReal::from_rat(&bernoulli(2 * j), wd) * &zpow;
        last = term.abs();
        if term.log10_abs() < cutoff {
            break;
        }
        tail = &tail + &term;
        zpow = &zpow / &z2;
    }
    sum = &sum + &(&c * &tail);
    Ok(Approx { value: &one - &sum, bound: &c * &last, terms: head_terms as usize })
}

/// First `n <= n_max` where `1/((1)_(-k-n) (1)_(k+n))^2` and
/// `sin^2(k pi)/(pi^2 (k+n)^2)` disagree beyond the target tolerance.
///
/// The product `(1)_(-k-n) (1)_(k+n) = Gamma(1-k-n) Gamma(1+k+n)` starts
/// from `pi k / sin(pi k)` and is advanced by the Gamma recurrence
/// `p_(n+1) = p_n (1+k+n) / (-k-n)`.
pub fn reflection_termwise(k: &BigRat, n_max: usize, ctx: &EvalContext) -> Option<usize> {
    let kh = ctx.lift(k);
    let pi = hp_constant_pi(ctx);
    let c = sin_pi_k_sq_over_pi_sq(&kh, ctx);
    let mut prod = &(&pi * &kh) / &(&pi * &kh).sin();
    let one = HPReal::one(ctx.working_digits());
    for n in 0..=n_max {
        let via_gamma = &one / &prod.square();
        let closed = &c / &(&kh + n as i64).square();
        if (&via_gamma - &closed).abs() >= &ctx.tolerance() * &closed.abs() {
            return Some(n);
        }
        prod = &(&prod * &(&kh + (n as i64 + 1))) / &-(&kh + n as i64);
    }
    None
}

/// `(8/pi) sum_n w_n`, the `k = 1/2` case
/// `sum (3n+2) (1)_n^4 / ((1)_(n+1/2)^2 (1)_(2n+1))` with `w_0 = 1` and
/// `w_(n+1)/w_n = 4 (3n+5)(n+1)^4 / ((3n+2)(2n+3)^3 (2n+2))`.
pub fn pi_k_half_lhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    let s = hyper_sum(
        ctx,
        |n| (4 * (3 * n + 5) * (n + 1).pow(4), (3 * n + 2) * (2 * n + 3).pow(3) * (2 * n + 2)),
        |_| 1,
    )?;
    let scale = &HPReal::from_i64(8, ctx.working_digits()) / &hp_constant_pi(ctx);
    Ok(Approx { value: &s.value * &scale, bound: &s.bound * &scale, terms: s.terms })
}

pub fn pi_k_half_rhs(_: &Params, ctx: &EvalContext) -> Result<Approx> {
    Ok(Approx::exact(hp_constant_pi(ctx)))
}
