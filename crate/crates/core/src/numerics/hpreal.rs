use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::BigRat;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Binary precision used for a decimal working precision of `digits`.
pub(crate) fn bits_for(digits: u32) -> u64 {
    (digits as f64 * LOG2_10).ceil() as u64 + 16
}

/// Working parameters for a numeric evaluation: `target_digits` are
/// promised to the caller, `guard_digits` absorb rounding and truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalContext {
    pub target_digits: u32,
    pub guard_digits: u32,
}

impl EvalContext {
    pub const DEFAULT_GUARD: u32 = 20;

    pub fn new(target_digits: u32) -> Self {
        EvalContext { target_digits, guard_digits: Self::DEFAULT_GUARD }
    }

    pub fn with_guard(target_digits: u32, guard_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::Domain("target digits must be positive".into()));
        }
        if guard_digits < 10 {
            return Err(Error::Domain(format!("guard digits must be >= 10, got {guard_digits}")));
        }
        Ok(EvalContext { target_digits, guard_digits })
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// `10^-(D+g)`: below this everything is noise.
    pub fn epsilon(&self) -> HPReal {
        HPReal::pow10(-(self.working_digits() as i64), self.working_digits())
    }

    /// `10^-D`
    pub fn tolerance(&self) -> HPReal {
        HPReal::pow10(-(self.target_digits as i64), self.working_digits())
    }

    pub fn lift(&self, r: &BigRat) -> HPReal {
        HPReal::from_rat(r, self.working_digits())
    }

    pub fn int(&self, v: i64) -> HPReal {
        HPReal::from_i64(v, self.working_digits())
    }
}

/// Binary floating-point number `mant * 2^exp` carrying its own working
/// precision in decimal digits. Every arithmetic result is rounded to the
/// larger precision of its operands, with relative error below
/// `2^-(bits_for(digits) - 1)`.
#[derive(Clone, Debug)]
pub struct HPReal {
    mant: BigInt,
    exp: i64,
    digits: u32,
}

fn round_mag(mag: BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag;
    }
    let half = BigUint::one() << (shift - 1);
    (mag + half) >> shift
}

impl HPReal {
    fn rounded(mant: BigInt, exp: i64, digits: u32) -> HPReal {
        if mant.is_zero() {
            return HPReal { mant, exp: 0, digits };
        }
        let p = bits_for(digits);
        let nb = mant.bits();
        if nb <= p {
            return HPReal { mant, exp, digits };
        }
        let shift = nb - p;
        let (sign, mag) = mant.into_parts();
        let mag = round_mag(mag, shift);
        HPReal { mant: BigInt::from_biguint(sign, mag), exp: exp + shift as i64, digits }
    }

    pub fn zero(digits: u32) -> HPReal {
        HPReal { mant: BigInt::zero(), exp: 0, digits }
    }

    pub fn one(digits: u32) -> HPReal {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> HPReal {
        Self::rounded(BigInt::from(v), 0, digits)
    }

    pub fn from_bigint(v: &BigInt, digits: u32) -> HPReal {
        Self::rounded(v.clone(), 0, digits)
    }

    pub fn from_rat(r: &BigRat, digits: u32) -> HPReal {
        let (n, d) = (r.numer(), r.denom());
        if n.is_zero() {
            return Self::zero(digits);
        }
        let p = bits_for(digits);
        let s = (p as i64 + 2 + d.bits() as i64 - n.bits() as i64).max(0);
        let q = (n << s as usize) / d;
        Self::rounded(q, -s, digits)
    }

    /// Nearest `HPReal` to an `f64`; exact for every finite input.
    pub fn from_f64(v: f64, digits: u32) -> HPReal {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero(digits);
        }
        let bits = v.to_bits();
        let sign = if v < 0.0 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        Self::rounded(BigInt::from(m) * sign, e, digits)
    }

    /// `2^e`, exactly.
    pub fn pow2(e: i64, digits: u32) -> HPReal {
        HPReal { mant: BigInt::one(), exp: e, digits }
    }

    /// `10^e`, correctly rounded.
    pub fn pow10(e: i64, digits: u32) -> HPReal {
        let ten = BigInt::from(10u32);
        if e >= 0 {
            Self::from_bigint(&num_traits::pow(ten, e as usize), digits)
        } else {
            Self::from_rat(&BigRat::new(BigInt::one(), num_traits::pow(ten, (-e) as usize)), digits)
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Same value, re-rounded (or simply re-tagged when widening) to
    /// `digits`.
    pub fn with_digits(&self, digits: u32) -> HPReal {
        Self::rounded(self.mant.clone(), self.exp, digits)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> HPReal {
        HPReal { mant: self.mant.abs(), exp: self.exp, digits: self.digits }
    }

    /// `self * 2^k`, exactly.
    pub fn mul_pow2(&self, k: i64) -> HPReal {
        if self.is_zero() {
            return self.clone();
        }
        HPReal { mant: self.mant.clone(), exp: self.exp + k, digits: self.digits }
    }

    /// Exponent `t` with `2^(t-1) <= |self| < 2^t`; `None` for zero.
    pub fn top_bit(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Approximate `log10 |self|`, `-inf` for zero. Good to ~1e-15 and never
    /// overflows.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let nb = self.mant.bits();
        let shift = nb.saturating_sub(60);
        let top = (self.mant.magnitude() >> shift).to_f64().unwrap();
        top.log10() + (self.exp + shift as i64) as f64 * LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let nb = self.mant.bits();
        let shift = nb.saturating_sub(60);
        let top = (&self.mant >> shift).to_f64().unwrap();
        let e = self.exp + shift as i64;
        if e > 1100 {
            return top.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        // two steps so that neither factor under/overflows on its own
        let half = e / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Integer nearest to `self` (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        let (sign, mag) = self.mant.clone().into_parts();
        BigInt::from_biguint(sign, round_mag(mag, (-self.exp) as u64))
    }

    pub fn checked_div(&self, rhs: &HPReal) -> Option<HPReal> {
        if rhs.is_zero() {
            return None;
        }
        let digits = self.digits.max(rhs.digits);
        if self.is_zero() {
            return Some(Self::zero(digits));
        }
        let p = bits_for(digits) as i64;
        let s = (p + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << s as usize) / &rhs.mant;
        Some(Self::rounded(q, self.exp - s - rhs.exp, digits))
    }

    pub fn recip(&self) -> HPReal {
        HPReal::one(self.digits) / self
    }

    pub fn square(&self) -> HPReal {
        self * self
    }

    /// Integer power by repeated squaring; negative powers via the
    /// reciprocal.
    pub fn powi(&self, n: i64) -> HPReal {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = HPReal::one(self.digits);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Result<HPReal> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let p = bits_for(self.digits) as i64;
        // scale so that the integer square root carries p+2 bits and the
        // exponent is even
        let mut s = (2 * (p + 2) - self.mant.bits() as i64).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let m = (&self.mant << s as usize).sqrt();
        Ok(Self::rounded(m, (self.exp - s) / 2, self.digits))
    }

    fn cmp_value(&self, other: &HPReal) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top_bit().unwrap(), other.top_bit().unwrap());
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << (self.exp - e) as usize;
            let b = other.mant.magnitude() << (other.exp - e) as usize;
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }

    pub fn max(self, other: HPReal) -> HPReal {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `sig` significant digits, correctly rounded
    /// from the stored binary value. Moderate magnitudes use positional
    /// notation, others scientific (`1.234e-45`).
    pub fn to_decimal_string(&self, sig: u32) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let mag = self.mant.magnitude().clone();
        let ten = BigUint::from(10u32);
        let mut e10 = self.log10_abs().floor() as i64;
        let digits = loop {
            let s = sig as i64 - 1 - e10;
            let (mut num, mut den) = (mag.clone(), BigUint::one());
            if s >= 0 {
                num *= num_traits::pow(ten.clone(), s as usize);
            } else {
                den *= num_traits::pow(ten.clone(), (-s) as usize);
            }
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            let n = (num * 2u32 + &den) / (den * 2u32);
            if n >= num_traits::pow(ten.clone(), sig as usize) {
                e10 += 1;
            } else if n < num_traits::pow(ten.clone(), sig as usize - 1) {
                e10 -= 1;
            } else {
                break n.to_string();
            }
        };
        let sign = if self.is_negative() { "-" } else { "" };
        let sig = sig as i64;
        if (-6..sig.max(21)).contains(&e10) && e10 < sig {
            if e10 >= 0 {
                let (int, frac) = digits.split_at((e10 + 1) as usize);
                if frac.is_empty() {
                    format!("{sign}{int}")
                } else {
                    format!("{sign}{int}.{frac}")
                }
            } else {
                format!("{sign}0.{}{}", "0".repeat((-e10 - 1) as usize), digits)
            }
        } else {
            let (lead, rest) = digits.split_at(1);
            if rest.is_empty() {
                format!("{sign}{lead}e{e10}")
            } else {
                format!("{sign}{lead}.{rest}e{e10}")
            }
        }
    }

    /// Whether `self` and `other`, both rounded to `sig` significant digits,
    /// print identically.
    pub fn agrees_to(&self, other: &HPReal, sig: u32) -> bool {
        self.to_decimal_string(sig) == other.to_decimal_string(sig)
    }

    pub(crate) fn from_parts(mant: BigInt, exp: i64, digits: u32) -> HPReal {
        Self::rounded(mant, exp, digits)
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().map(|p| p as u32).unwrap_or(self.digits);
        f.write_str(&self.to_decimal_string(sig))
    }
}

impl Add for &HPReal {
    type Output = HPReal;
    fn add(self, rhs: &HPReal) -> HPReal {
        let digits = self.digits.max(rhs.digits);
        if rhs.is_zero() {
            return self.with_digits(digits);
        }
        if self.is_zero() {
            return rhs.with_digits(digits);
        }
        let p = bits_for(digits) as i64;
        let (ta, tb) = (self.top_bit().unwrap(), rhs.top_bit().unwrap());
        if ta > tb + p + 2 {
            return self.with_digits(digits);
        }
        if tb > ta + p + 2 {
            return rhs.with_digits(digits);
        }
        let e = self.exp.min(rhs.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (&rhs.mant << (rhs.exp - e) as usize);
        HPReal::rounded(m, e, digits)
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal { mant: -&self.mant, exp: self.exp, digits: self.digits }
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal { mant: -self.mant, exp: self.exp, digits: self.digits }
    }
}

impl Sub for &HPReal {
    type Output = HPReal;
    fn sub(self, rhs: &HPReal) -> HPReal {
        self + &(-rhs)
    }
}

impl Mul for &HPReal {
    type Output = HPReal;
    fn mul(self, rhs: &HPReal) -> HPReal {
        HPReal::rounded(&self.mant * &rhs.mant, self.exp + rhs.exp, self.digits.max(rhs.digits))
    }
}

impl Div for &HPReal {
    type Output = HPReal;
    fn div(self, rhs: &HPReal) -> HPReal {
        self.checked_div(rhs).expect("HPReal division by zero")
    }
}

macro_rules! forward_binops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<HPReal> for HPReal {
            type Output = HPReal;
            fn $f(self, rhs: HPReal) -> HPReal { (&self).$f(&rhs) }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $f(self, rhs: &HPReal) -> HPReal { (&self).$f(rhs) }
        }
        impl $tr<HPReal> for &HPReal {
            type Output = HPReal;
            fn $f(self, rhs: HPReal) -> HPReal { self.$f(&rhs) }
        }
        impl $tr<i64> for &HPReal {
            type Output = HPReal;
            fn $f(self, rhs: i64) -> HPReal { self.$f(&HPReal::from_i64(rhs, self.digits)) }
        }
        impl $tr<i64> for HPReal {
            type Output = HPReal;
            fn $f(self, rhs: i64) -> HPReal { (&self).$f(&HPReal::from_i64(rhs, self.digits)) }
        }
    )*};
}
forward_binops!(Add add, Sub sub, Mul mul, Div div);

impl HPReal {
    /// The exact integer value, if `self` is integral.
    #[cfg(test)]
    fn as_integer(&self) -> Option<BigInt> {
        if self.exp >= 0 {
            Some(&self.mant << self.exp as usize)
        } else {
            use num_integer::Integer;
            let (q, r) = self.mant.div_rem(&(BigInt::one() << (-self.exp) as usize));
            r.is_zero().then_some(q)
        }
    }
}
