use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hpreal::{EvalContext, HPReal};
use crate::error::{Error, Result};
use crate::exact::BigRat;

/// Upper limit on the number of factors of one infinite product.
pub const MAX_PRODUCT_FACTORS: usize = 5_000_000;

/// Length of a q-shifted factorial `(a;q)_sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subscript {
    Finite(u64),
    Infinite,
    /// Real subscript `x`, read as `(a;q)_inf / (a q^x;q)_inf`.
    General(BigRat),
}

pub(crate) fn check_base(q: &HPReal) -> Result<()> {
    if !q.is_positive() || q >= &HPReal::one(q.digits()) {
        return Err(Error::Domain(format!("q must lie in (0,1), got {}", q.to_decimal_string(12))));
    }
    Ok(())
}

/// `q^e` for rational `e`: repeated squaring for integers, `exp(e ln q)`
/// otherwise.
pub fn qpow(q: &HPReal, e: &BigRat, ctx: &EvalContext) -> Result<HPReal> {
    let q = q.with_digits(ctx.working_digits().max(q.digits()));
    if e.is_integer() {
        let n = e.to_integer().to_i64().ok_or_else(|| Error::Domain(format!("exponent {e} too large")))?;
        return Ok(q.powi(n));
    }
    q.pow_real(&ctx.lift(e))
}

/// Numeric q-shifted factorial for real `a` and `0 < q < 1`.
///
/// Infinite products stop at the first index `J` with
/// `|a| q^J / (1 - q) < 10^-(D+g)`, which bounds the relative truncation
/// error. A zero factor in the denominator of a general subscript is a
/// [`Error::Pole`].
pub fn qpoch_num(a: &HPReal, q: &HPReal, sub: &Subscript, ctx: &EvalContext) -> Result<HPReal> {
    check_base(q)?;
    let wd = ctx.working_digits();
    let a = a.with_digits(wd.max(a.digits()));
    let q = q.with_digits(wd.max(q.digits()));
    match sub {
        Subscript::Finite(n) => {
            let mut acc = HPReal::one(wd);
            let mut aq = a;
            for _ in 0..*n {
                acc = &acc * &(HPReal::one(wd) - &aq);
                aq = &aq * &q;
            }
            Ok(acc)
        }
        Subscript::Infinite => infinite_product(&a, &q, ctx),
        Subscript::General(x) => {
            let num = infinite_product(&a, &q, ctx)?;
            let shifted = &a * &qpow(&q, x, ctx)?;
            let den = infinite_product(&shifted, &q, ctx)?;
            num.checked_div(&den).ok_or_else(|| Error::Pole(format!("(a q^{x};q)_inf vanishes")))
        }
    }
}

fn infinite_product(a: &HPReal, q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let wd = ctx.working_digits();
    let one = HPReal::one(wd);
    let eps_log = -(wd as f64);
    let tail_scale = -(&one - q).log10_abs();
    let mut acc = one.clone();
    let mut aq = a.clone();
    for _ in 0..MAX_PRODUCT_FACTORS {
        if aq.is_zero() || aq.log10_abs() + tail_scale < eps_log {
            return Ok(acc);
        }
        acc = &acc * &(&one - &aq);
        if acc.is_zero() {
            return Ok(acc);
        }
        aq = &aq * q;
    }
    Err(Error::PrecisionBudget(format!(
        "infinite product needs more than {MAX_PRODUCT_FACTORS} factors at q = {}",
        q.to_decimal_string(8)
    )))
}

/// `(q^e; q)_sub` where the exponent is known exactly, so factors `1 - q^0`
/// are recognised as exact zeros. Non-contracting factors (`e + j <= 0`)
/// are multiplied in directly before the geometric tail.
pub fn qpoch_qpow(e: &BigRat, q: &HPReal, sub: &Subscript, ctx: &EvalContext) -> Result<HPReal> {
    check_base(q)?;
    let wd = ctx.working_digits();
    let hits_zero = |len: Option<u64>| -> bool {
        if !e.is_integer() || e.is_positive() {
            return false;
        }
        // factor j = -e is inside the product
        match len {
            None => true,
            Some(n) => (-e.to_integer()).to_u64().is_some_and(|j| j < n),
        }
    };
    match sub {
        Subscript::Finite(n) => {
            if hits_zero(Some(*n)) {
                return Ok(HPReal::zero(wd));
            }
            qpoch_num(&qpow(q, e, ctx)?, q, sub, ctx)
        }
        Subscript::Infinite => {
            if hits_zero(None) {
                return Ok(HPReal::zero(wd));
            }
            qpoch_num(&qpow(q, e, ctx)?, q, sub, ctx)
        }
        Subscript::General(x) => {
            let num = qpoch_qpow(e, q, &Subscript::Infinite, ctx)?;
            let den = qpoch_qpow(&(e + x), q, &Subscript::Infinite, ctx)?;
            if den.is_zero() {
                return Err(Error::Pole(format!("(q^{};q)_inf vanishes", e + x)));
            }
            Ok(&num / &den)
        }
    }
}

/// Walks `(q^(e0+n); q)_inf` for `n = 0, 1, 2, ...` (or downwards), one
/// factor per step, restarting from scratch when it leaves an exact zero.
#[derive(Clone, Debug)]
pub struct ShiftedInfProduct {
    q: HPReal,
    e: BigRat,
    qe: HPReal,
    value: HPReal,
    ctx: EvalContext,
}

impl ShiftedInfProduct {
    pub fn new(e0: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<Self> {
        check_base(q)?;
        let q = q.with_digits(ctx.working_digits().max(q.digits()));
        Ok(ShiftedInfProduct {
            qe: qpow(&q, e0, ctx)?,
            value: qpoch_qpow(e0, &q, &Subscript::Infinite, ctx)?,
            e: e0.clone(),
            q,
            ctx: *ctx,
        })
    }

    pub fn exponent(&self) -> &BigRat {
        &self.e
    }

    pub fn value(&self) -> &HPReal {
        &self.value
    }

    /// `e -> e + 1`: divide by the factor `1 - q^e`.
    pub fn step_up(&mut self) -> Result<()> {
        let next = &self.e + BigRat::one();
        if self.value.is_zero() {
            self.value = qpoch_qpow(&next, &self.q, &Subscript::Infinite, &self.ctx)?;
        } else {
            let factor = HPReal::one(self.ctx.working_digits()) - &self.qe;
            self.value = &self.value / &factor;
        }
        self.qe = &self.qe * &self.q;
        self.e = next;
        Ok(())
    }

    /// `e -> e - 1`: multiply by the factor `1 - q^(e-1)`.
    pub fn step_down(&mut self) {
        let next = &self.e - BigRat::one();
        self.qe = &self.qe / &self.q;
        if next.is_zero() {
            self.value = HPReal::zero(self.ctx.working_digits());
        } else if !self.value.is_zero() {
            let factor = HPReal::one(self.ctx.working_digits()) - &self.qe;
            self.value = &self.value * &factor;
        }
        self.e = next;
    }
}
