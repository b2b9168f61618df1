use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;

use super::hpreal::{bits_for, EvalContext, HPReal};
use crate::error::{Error, Result};

/// Selector for [`hp_transcendental`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transcendental {
    Exp,
    Ln,
    Sin,
}

// Highest-precision value computed so far; lower requests are rounded from
// it. Concurrent initialisers may both compute, the wider result wins.
static PI_CACHE: Mutex<Option<HPReal>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<HPReal>> = Mutex::new(None);

fn cached(cache: &Mutex<Option<HPReal>>, digits: u32, compute: fn(u32) -> HPReal) -> HPReal {
    if let Some(v) = cache.lock().unwrap().as_ref() {
        if v.digits() >= digits {
            return v.with_digits(digits);
        }
    }
    let v = compute(digits + 10);
    let mut slot = cache.lock().unwrap();
    if slot.as_ref().is_none_or(|old| old.digits() < v.digits()) {
        *slot = Some(v.clone());
    }
    v.with_digits(digits)
}

// Chudnovsky binary splitting: returns (P, Q, T) over terms [a, b).
fn chudnovsky_split(a: u64, b: u64) -> (BigInt, BigInt, BigInt) {
    if b - a == 1 {
        let (p, q) = if a == 0 {
            (BigInt::one(), BigInt::one())
        } else {
            let a_big = BigInt::from(a);
            let p = BigInt::from(6 * a - 5) * BigInt::from(2 * a - 1) * BigInt::from(6 * a - 1);
            let q = &a_big * &a_big * &a_big * BigInt::from(10_939_058_860_032_000u64);
            (p, q)
        };
        let mut t = &p * (BigInt::from(13_591_409u64) + BigInt::from(545_140_134u64) * BigInt::from(a));
        if a % 2 == 1 {
            t = -t;
        }
        return (p, q, t);
    }
    let m = (a + b) / 2;
    let (p1, q1, t1) = chudnovsky_split(a, m);
    let (p2, q2, t2) = chudnovsky_split(m, b);
    (&p1 * &p2, &q1 * &q2, &q2 * &t1 + &p1 * &t2)
}

fn compute_pi(digits: u32) -> HPReal {
    let terms = digits as u64 / 14 + 2;
    let (_, q, t) = chudnovsky_split(0, terms);
    let prec = bits_for(digits) as usize + 8;
    let sqrt_10005 = (BigInt::from(10005u32) << (2 * prec)).sqrt();
    let mant = BigInt::from(426_880u32) * sqrt_10005 * q / t;
    HPReal::from_parts(mant, -(prec as i64), digits)
}

// atanh(1/m) for integer m >= 2, summed in fixed point.
fn atanh_inv(m: u64, digits: u32) -> HPReal {
    let prec = bits_for(digits) as usize + 16;
    let m2 = BigInt::from(m * m);
    let mut power = (BigInt::one() << prec) / BigInt::from(m);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &m2;
        if power.bits() == 0 {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    HPReal::from_parts(sum, -(prec as i64), digits)
}

fn compute_ln2(digits: u32) -> HPReal {
    atanh_inv(3, digits).mul_pow2(1)
}

/// `pi` rounded to `digits` significant decimal digits of working precision.
pub fn pi(digits: u32) -> HPReal {
    cached(&PI_CACHE, digits, compute_pi)
}

pub fn ln2(digits: u32) -> HPReal {
    cached(&LN2_CACHE, digits, compute_ln2)
}

/// `pi` at the context's working precision.
pub fn hp_constant_pi(ctx: &EvalContext) -> HPReal {
    pi(ctx.working_digits())
}

/// `f(x)` at the context's working precision.
pub fn hp_transcendental(f: Transcendental, x: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let x = x.with_digits(ctx.working_digits().max(x.digits()));
    match f {
        Transcendental::Exp => Ok(x.exp()),
        Transcendental::Ln => x.ln(),
        Transcendental::Sin => Ok(x.sin()),
    }
}

impl HPReal {
    pub fn exp(&self) -> HPReal {
        let d = self.digits();
        if self.is_zero() {
            return HPReal::one(d);
        }
        // halve until |r| < 2^-10, then square back up
        let halvings = (self.top_bit().unwrap() + 10).max(0);
        let wd = d + 10 + (halvings as f64 * 0.302).ceil() as u32;
        let r = self.with_digits(wd).mul_pow2(-halvings);
        let cutoff = -(bits_for(wd) as i64) - 4;
        let mut sum = HPReal::one(wd);
        let mut term = HPReal::one(wd);
        for n in 1i64.. {
            term = &(&term * &r) / n;
            if term.top_bit().is_none_or(|t| t < cutoff) {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..halvings {
            sum = sum.square();
        }
        sum.with_digits(d)
    }

    /// Natural logarithm; domain error for nonpositive input.
    pub fn ln(&self) -> Result<HPReal> {
        if !self.is_positive() {
            return Err(Error::Domain(format!("ln of nonpositive value {}", self.to_decimal_string(6))));
        }
        let d = self.digits();
        let wd = d + 10;
        // self = m * 2^k with m in [1/sqrt2, sqrt2)
        let mut k = self.top_bit().unwrap();
        let mut m = self.with_digits(wd).mul_pow2(-k);
        if m.to_f64() < std::f64::consts::FRAC_1_SQRT_2 {
            m = m.mul_pow2(1);
            k -= 1;
        }
        let one = HPReal::one(wd);
        let z = &(&m - &one) / &(&m + &one);
        let z2 = z.square();
        let cutoff = -(bits_for(wd) as i64) - 4;
        let mut power = z.clone();
        let mut sum = z;
        for j in 1i64.. {
            power = &power * &z2;
            let term = &power / (2 * j + 1);
            if term.top_bit().is_none_or(|t| t < cutoff) {
                break;
            }
            sum = &sum + &term;
        }
        let log_m = sum.mul_pow2(1);
        let result = &log_m + &(&ln2(wd) * k);
        Ok(result.with_digits(d))
    }

    pub fn sin(&self) -> HPReal {
        let d = self.digits();
        if self.is_zero() {
            return self.clone();
        }
        let extra = self.top_bit().unwrap().max(0) as f64 * 0.302;
        let wd = d + 10 + extra.ceil() as u32;
        let x = self.with_digits(wd);
        let two_pi = pi(wd).mul_pow2(1);
        let turns = (&x / &two_pi).round_to_bigint();
        let r = &x - &(&two_pi * &HPReal::from_bigint(&turns, wd));
        if r.is_zero() {
            return HPReal::zero(d);
        }
        let r2 = r.square();
        let cutoff = r.top_bit().unwrap() - bits_for(wd) as i64 - 4;
        let mut term = r.clone();
        let mut sum = r;
        for j in 1i64.. {
            term = -(&(&term * &r2) / ((2 * j) * (2 * j + 1)));
            if term.top_bit().is_none_or(|t| t < cutoff) {
                break;
            }
            sum = &sum + &term;
        }
        sum.with_digits(d)
    }

    pub fn cos(&self) -> HPReal {
        let wd = self.digits() + 5;
        let half_pi = pi(wd).mul_pow2(-1);
        (&self.with_digits(wd) + &half_pi).sin().with_digits(self.digits())
    }

    /// `self^e` for positive `self`, as `exp(e ln self)`.
    pub fn pow_real(&self, e: &HPReal) -> Result<HPReal> {
        Ok((e * &self.ln()?).exp())
    }
}
