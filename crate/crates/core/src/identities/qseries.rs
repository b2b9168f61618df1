//! q-series sides, numerically for real `0 < q < 1` and as exact truncated
//! power series in a formal `q`.

use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::{qpoch_inf_series, BigRat, QSeries};
use crate::numerics::{
    hp_constant_pi, qpoch_num, qpoch_qpow, qpow, sum_until, Approx, EvalContext, HPReal, ShiftedInfProduct, Subscript,
};

use super::Params;

fn base(p: &Params, ctx: &EvalContext) -> HPReal {
    ctx.lift(p.q())
}

fn integer_k(p: &Params) -> Result<u64> {
    let k = p.k();
    if !k.is_integer() {
        return Err(Error::Domain(format!("exact-series mode needs integer k, got {k}")));
    }
    k.to_integer().to_u64().filter(|&v| v >= 1).ok_or_else(|| Error::Domain(format!("k must be >= 1, got {k}")))
}

fn one_minus(x: &HPReal) -> HPReal {
    &HPReal::one(x.digits()) - x
}

fn one_plus(x: &HPReal) -> HPReal {
    &HPReal::one(x.digits()) + x
}

fn minus_one() -> BigRat {
    -BigRat::one()
}

// ---- HKS1 ----

/// `sum q^(2n(n+1)) (1 + q^(2n+2) - 2q^(4n+3)) (q^2;q^2)_n^3 / ((q;q^2)_(n+1)^3 (-1;q)_(2n+3))`.
pub fn hks1_lhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    hks1_lhs_at(&base(p, ctx), ctx)
}

pub(crate) fn hks1_lhs_at(q: &HPReal, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let q = q.with_digits(wd);
    let q2 = q.square();
    // ratio part (q^2;q^2)_n^3 / ((q;q^2)_(n+1)^3 (-1;q)_(2n+3)) at n = 0
    let mut ratio = &HPReal::one(wd) / &(&(&one_minus(&q).powi(3) * 2) * &(&one_plus(&q) * &one_plus(&q2)));
    let mut power = HPReal::one(wd); // q^(2n(n+1))
    let mut q2n = HPReal::one(wd); // q^(2n)
    sum_until(
        |i| {
            if i > 0 {
                let q2n2 = &q2n * &q2;
                let q2n3 = &q2n2 * &q;
                ratio = &(&ratio * &one_minus(&q2n2).powi(3))
                    / &(&(&one_minus(&q2n3).powi(3) * &one_plus(&q2n3)) * &one_plus(&(&q2n3 * &q)));
                power = &power * &q2n2.square();
                q2n = q2n2;
            }
            let q2n2 = &q2n * &q2;
            let q4n3 = &(&q2n.square() * &q2) * &q;
            let lin = &(&HPReal::one(wd) + &q2n2) - &q4n3.mul_pow2(1);
            Ok(&(&power * &lin) * &ratio)
        },
        ctx,
    )
}

/// `1/2 sum q^(2n) / (1 - q^(2n+1))^2`.
pub fn hks1_rhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let q = base(p, ctx).with_digits(ctx.working_digits());
    let q2 = q.square();
    let mut q2n = HPReal::one(ctx.working_digits());
    let s = sum_until(
        |i| {
            if i > 0 {
                q2n = &q2n * &q2;
            }
            Ok(&q2n / &one_minus(&(&q2n * &q)).square())
        },
        ctx,
    )?;
    Ok(Approx { value: s.value.mul_pow2(-1), bound: s.bound.mul_pow2(-1), terms: s.terms })
}

pub fn hks1_lhs_series(_: &Params, order: usize) -> Result<QSeries> {
    let mut ratio = QSeries::one(order);
    for e in [1, 1, 1] {
        ratio.div_binomial(&BigRat::one(), e)?;
    }
    for e in [0, 1, 2] {
        ratio.div_binomial(&minus_one(), e)?;
    }
    let mut sum = QSeries::zero(order);
    let mut n = 0usize;
    while 2 * n * (n + 1) <= order {
        let mut lin = QSeries::one(order);
        lin = &lin + &QSeries::monomial(BigRat::one(), 2 * n + 2, order);
        lin = &lin - &QSeries::monomial(BigRat::from_integer(2.into()), 4 * n + 3, order);
        sum = &sum + &(&lin * &ratio).shift_up(2 * n * (n + 1));
        for _ in 0..3 {
            ratio.mul_binomial(&BigRat::one(), 2 * n + 2);
            ratio.div_binomial(&BigRat::one(), 2 * n + 3)?;
        }
        ratio.div_binomial(&minus_one(), 2 * n + 3)?;
        ratio.div_binomial(&minus_one(), 2 * n + 4)?;
        n += 1;
    }
    Ok(sum)
}

pub fn hks1_rhs_series(_: &Params, order: usize) -> Result<QSeries> {
    let mut sum = QSeries::zero(order);
    let mut n = 0;
    while 2 * n <= order {
        let mut t = QSeries::monomial(BigRat::new(1.into(), 2.into()), 2 * n, order);
        t.div_binomial(&BigRat::one(), 2 * n + 1)?;
        t.div_binomial(&BigRat::one(), 2 * n + 1)?;
        sum = &sum + &t;
        n += 1;
    }
    Ok(sum)
}

// ---- HKS2 ----

/// `sum q^(n(n+1)/2) (1 - q^(3n+2))/(1 - q) (q;q)_n^3 (-q;q)_n / (q^3;q^2)_n^3`.
pub fn hks2_lhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let q = base(p, ctx).with_digits(wd);
    let inv = &HPReal::one(wd) / &one_minus(&q);
    let mut ratio = HPReal::one(wd);
    let mut power = HPReal::one(wd); // q^(n(n+1)/2)
    let mut qn = HPReal::one(wd);
    sum_until(
        |i| {
            if i > 0 {
                let qn1 = &qn * &q;
                let q2n3 = &(&qn.square() * &q) * &q.square();
                ratio = &(&ratio * &(&one_minus(&qn1).powi(3) * &one_plus(&qn1))) / &one_minus(&q2n3).powi(3);
                power = &power * &qn1;
                qn = qn1;
            }
            let q3n2 = &qn.powi(3) * &q.square();
            Ok(&(&(&power * &one_minus(&q3n2)) * &inv) * &ratio)
        },
        ctx,
    )
}

fn even_odd_products(q: &HPReal, ctx: &EvalContext) -> Result<(HPReal, HPReal)> {
    let q2 = q.square();
    let even = qpoch_num(&q2, &q2, &Subscript::Infinite, ctx)?;
    let odd = qpoch_num(q, &q2, &Subscript::Infinite, ctx)?;
    Ok((even, odd))
}

/// `(1-q)^2 (q^2;q^2)_inf^4 / (q;q^2)_inf^4`.
pub fn hks2_rhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let q = base(p, ctx);
    let (even, odd) = even_odd_products(&q, ctx)?;
    Ok(Approx::exact(&one_minus(&q.with_digits(ctx.working_digits())).square() * &(&even / &odd).powi(4)))
}

pub fn hks2_lhs_series(_: &Params, order: usize) -> Result<QSeries> {
    let mut ratio = QSeries::one(order);
    ratio.div_binomial(&BigRat::one(), 1)?;
    let mut sum = QSeries::zero(order);
    let mut n = 0usize;
    while n * (n + 1) / 2 <= order {
        let mut t = ratio.shift_up(n * (n + 1) / 2);
        t.mul_binomial(&BigRat::one(), 3 * n + 2);
        sum = &sum + &t;
        for _ in 0..3 {
            ratio.mul_binomial(&BigRat::one(), n + 1);
            ratio.div_binomial(&BigRat::one(), 2 * n + 3)?;
        }
        ratio.mul_binomial(&minus_one(), n + 1);
        n += 1;
    }
    Ok(sum)
}

pub fn hks2_rhs_series(_: &Params, order: usize) -> Result<QSeries> {
    let mut s = QSeries::one(order);
    s.mul_binomial(&BigRat::one(), 1);
    s.mul_binomial(&BigRat::one(), 1);
    for j in 1..=order {
        for _ in 0..4 {
            if j % 2 == 0 {
                s.mul_binomial(&BigRat::one(), j);
            } else {
                s.div_binomial(&BigRat::one(), j)?;
            }
        }
    }
    Ok(s)
}

/// `(1-q) (q^2;q^2)_inf^2 / (q;q^2)_inf^2`, which tends to `pi/2` as `q -> 1`.
pub fn qgamma_value(q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let (even, odd) = even_odd_products(q, ctx)?;
    Ok(&one_minus(&q.with_digits(ctx.working_digits())) * &(&even / &odd).square())
}

pub fn half_pi(ctx: &EvalContext) -> HPReal {
    hp_constant_pi(ctx).mul_pow2(-1)
}

/// `4 (1-q)^2` times the left side of HKS1; tends to `pi^2/4`.
pub fn hks1_scaled_value(q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let s = hks1_lhs_at(q, ctx)?;
    Ok(&one_minus(&q.with_digits(ctx.working_digits())).square().mul_pow2(2) * &s.value)
}

pub fn quarter_pi_squared(ctx: &EvalContext) -> HPReal {
    hp_constant_pi(ctx).square().mul_pow2(-2)
}

// ---- partitions ----

pub fn partition_lhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let q = base(p, ctx);
    let full = qpoch_num(&q, &q, &Subscript::Infinite, ctx)?;
    Ok(Approx::exact(&HPReal::one(ctx.working_digits()) / &full))
}

/// `sum q^(n^2) / (q;q)_n^2`.
pub fn partition_rhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let q = base(p, ctx).with_digits(wd);
    let mut t = HPReal::one(wd);
    let mut qn = HPReal::one(wd);
    sum_until(
        |i| {
            if i > 0 {
                // t_n = t_(n-1) q^(2n-1) / (1 - q^n)^2
                let qn1 = &qn * &q;
                t = &(&(&t * &qn) * &qn1) / &one_minus(&qn1).square();
                qn = qn1;
            }
            Ok(t.clone())
        },
        ctx,
    )
}

pub fn partition_lhs_series(_: &Params, order: usize) -> Result<QSeries> {
    qpoch_inf_series(1, order)?.invert()
}

pub fn partition_rhs_series(_: &Params, order: usize) -> Result<QSeries> {
    let mut sum = QSeries::zero(order);
    let mut inv = QSeries::one(order); // 1/(q;q)_n^2
    let mut n = 0usize;
    while n * n <= order {
        sum = &sum + &inv.shift_up(n * n);
        n += 1;
        inv.div_binomial(&BigRat::one(), n)?;
        inv.div_binomial(&BigRat::one(), n)?;
    }
    Ok(sum)
}

// ---- main theorem ----

/// Left side
/// `q sum_n q^(n-2k+k^2) (2q^k - q^(n+1) - q^(2n+2)) / (1 + q^(n+1))
///  (q;q)_n^4 / ((q;q)_(k-1)^2 (q;q)_(2n+1) (q;q)_(n-k+1)^2)`
/// with `1/(q;q)_x = (q^(x+1);q)_inf / (q;q)_inf`.
pub fn main_lhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let q = base(p, ctx).with_digits(wd);
    let k = p.k().clone();
    let one = HPReal::one(wd);
    let full = qpoch_num(&q, &q, &Subscript::Infinite, ctx)?;
    let qk_inf = qpoch_qpow(&k, &q, &Subscript::Infinite, ctx)?;
    let e = BigRat::one() - BigRat::from_integer(2.into()) * &k + &k * &k;
    let front = &(&qpow(&q, &e, ctx)? * &qk_inf.square()) / &full.powi(4);
    let qk2 = qpow(&q, &k, ctx)?.mul_pow2(1);
    let mut tail = ShiftedInfProduct::new(&(BigRat::from_integer(2.into()) - &k), &q, ctx)?;
    let mut poch = &one / &one_minus(&q); // (q;q)_n^4 / (q;q)_(2n+1)
    let mut qn = one.clone();
    sum_until(
        |i| {
            if i > 0 {
                let qn1 = &qn * &q;
                let q2n2 = qn1.square();
                poch = &(&poch * &one_minus(&qn1).powi(4)) / &(&one_minus(&q2n2) * &one_minus(&(&q2n2 * &q)));
                tail.step_up()?;
                qn = qn1;
            }
            let qn1 = &qn * &q;
            let lin = &(&(&qk2 - &qn1) - &qn1.square()) / &(&one + &qn1);
            Ok(&(&(&(&front * &qn) * &lin) * &poch) * &tail.value().square())
        },
        ctx,
    )
}

/// Right side
/// `(q;q)_inf^-4 sum_n q^((k+n)^2) ((q;q)_inf^3 - (q^(1-n-k);q)_inf^2) (q^(1+n+k);q)_inf^2`.
pub fn main_rhs(p: &Params, ctx: &EvalContext) -> Result<Approx> {
    let wd = ctx.working_digits();
    let q = base(p, ctx).with_digits(wd);
    let k = p.k().clone();
    let full = qpoch_num(&q, &q, &Subscript::Infinite, ctx)?;
    let full3 = full.powi(3);
    let mut low = ShiftedInfProduct::new(&(BigRat::one() - &k), &q, ctx)?;
    let mut high = ShiftedInfProduct::new(&(BigRat::one() + &k), &q, ctx)?;
    let mut power = qpow(&q, &(&k * &k), ctx)?; // q^((k+n)^2)
    let q2k = qpow(&q, &(BigRat::from_integer(2.into()) * &k), ctx)?;
    let mut q2n1 = q.clone(); // q^(2n+1)
    let s = sum_until(
        |i| {
            if i > 0 {
                low.step_down();
                high.step_up()?;
                power = &(&power * &q2k) * &q2n1;
                q2n1 = &q2n1 * &q.square();
            }
            let bracket = if low.value().is_zero() { full3.clone() } else { &full3 - &low.value().square() };
            Ok(&(&power * &bracket) * &high.value().square())
        },
        ctx,
    )?;
    let f4 = full.powi(4);
    Ok(Approx { value: &s.value / &f4, bound: &s.bound / &f4, terms: s.terms })
}

/// Exact left side for integer `k >= 1`; terms with `n < k - 1` vanish.
pub fn main_lhs_series(p: &Params, order: usize) -> Result<QSeries> {
    let k = integer_k(p)? as usize;
    let one = BigRat::one();
    // P_n = (q;q)_n^4 / ((q;q)_(k-1)^2 (q;q)_(2n+1) (q;q)_(n-k+1)^2) at n = k-1
    let mut poch = QSeries::one(order);
    for j in 1..k {
        poch.mul_binomial(&one, j);
        poch.mul_binomial(&one, j);
    }
    for j in 1..=2 * k - 1 {
        poch.div_binomial(&one, j)?;
    }
    let mut sum = QSeries::zero(order);
    let mut n = k - 1;
    loop {
        let shift = n + 1 + k * k - 2 * k;
        if shift > order {
            break;
        }
        let mut lin = QSeries::monomial(BigRat::from_integer(2.into()), k, order);
        lin = &lin - &QSeries::monomial(one.clone(), n + 1, order);
        lin = &lin - &QSeries::monomial(one.clone(), 2 * n + 2, order);
        let mut t = &lin * &poch;
        t.div_binomial(&minus_one(), n + 1)?;
        sum = &sum + &t.shift_up(shift);
        for _ in 0..4 {
            poch.mul_binomial(&one, n + 1);
        }
        poch.div_binomial(&one, 2 * n + 2)?;
        poch.div_binomial(&one, 2 * n + 3)?;
        poch.div_binomial(&one, n + 2 - k)?;
        poch.div_binomial(&one, n + 2 - k)?;
        n += 1;
    }
    Ok(sum)
}

/// Exact right side for integer `k >= 1`. Every `(q^(1-n-k);q)_inf` then
/// contains the factor `1 - q^0` and vanishes, leaving
/// `sum_n q^((k+n)^2) (q^(1+n+k);q)_inf^2 / (q;q)_inf`.
pub fn main_rhs_series(p: &Params, order: usize) -> Result<QSeries> {
    let k = integer_k(p)? as usize;
    let inv_full = qpoch_inf_series(1, order)?.invert()?;
    let mut sum = QSeries::zero(order);
    let mut n = 0usize;
    while (k + n) * (k + n) <= order {
        let high = qpoch_inf_series((1 + n + k) as i64, order)?;
        sum = &sum + &(&high * &high).shift_up((k + n) * (k + n));
        n += 1;
    }
    Ok(&sum * &inv_full)
}
