use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::BigRat;
use super::unipoly::{write_terms, UniPoly};
use crate::error::{Error, Result};

/// Power series in `q` known exactly modulo `q^(order+1)`.
///
/// Binary operations truncate to the smaller of the two orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRat>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![BigRat::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigRat::one(), 0, order)
    }

    /// `c q^e`; vanishes identically when `e > order`.
    pub fn monomial(c: BigRat, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn from_poly(p: &UniPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in p.coeffs().iter().take(order + 1).enumerate() {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRat>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Reduces modulo `q^(order+1)`. Panics if `order` exceeds the current
    /// order, since those coefficients are unknown.
    pub fn truncate(&self, order: usize) -> QSeries {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &BigRat) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `q^e`.
    pub fn shift_up(&self, e: usize) -> QSeries {
        let n = self.coeffs.len();
        let mut out = vec![BigRat::zero(); n];
        if e < n {
            out[e..].clone_from_slice(&self.coeffs[..n - e]);
        }
        QSeries { coeffs: out }
    }

    /// Multiplies by `1 - c q^e` in place.
    pub fn mul_binomial(&mut self, c: &BigRat, e: usize) {
        let n = self.coeffs.len();
        if e == 0 {
            let f = BigRat::one() - c;
            for x in &mut self.coeffs {
                *x *= &f;
            }
            return;
        }
        for i in (e..n).rev() {
            let t = &self.coeffs[i - e] * c;
            self.coeffs[i] -= t;
        }
    }

    /// Divides by `1 - c q^e` in place. A constant factor `1 - c` must be
    /// nonzero.
    pub fn div_binomial(&mut self, c: &BigRat, e: usize) -> Result<()> {
        if e == 0 {
            let f = BigRat::one() - c;
            if f.is_zero() {
                return Err(Error::NotInvertible);
            }
            let inv = f.recip();
            for x in &mut self.coeffs {
                *x *= &inv;
            }
            return Ok(());
        }
        for i in e..self.coeffs.len() {
            let t = &self.coeffs[i - e] * c;
            self.coeffs[i] += t;
        }
        Ok(())
    }

    pub fn pow(&self, k: u32) -> QSeries {
        (0..k).fold(QSeries::one(self.order()), |acc, _| &acc * self)
    }

    pub fn invert(&self) -> Result<QSeries> {
        series_invert(self)
    }

    pub fn eval(&self, q0: &BigRat) -> BigRat {
        series_eval(self, q0)
    }

    /// Index of the first coefficient where `self` and `other` differ, over
    /// their common order.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        if self.is_integral() && rhs.is_integral() {
            let a: Vec<&BigInt> = self.coeffs[..n].iter().map(|c| c.numer()).collect();
            let b: Vec<&BigInt> = rhs.coeffs[..n].iter().map(|c| c.numer()).collect();
            let mut out = vec![BigInt::zero(); n];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b[..n - i].iter().enumerate() {
                    if !y.is_zero() {
                        out[i + j] += *x * *y;
                    }
                }
            }
            return QSeries { coeffs: out.into_iter().map(BigRat::from_integer).collect() };
        }
        let mut out = vec![BigRat::zero(); n];
        for (i, x) in self.coeffs[..n].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs[..n - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        QSeries { coeffs: out }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for QSeries {
            type Output = QSeries;
            fn $f(self, rhs: QSeries) -> QSeries {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate())?;
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// `(q^e; q)_inf` modulo `q^(order+1)`. Factors `1 - q^j` with `j > order`
/// are congruent to one and are skipped.
pub fn qpoch_inf_series(e: i64, order: usize) -> Result<QSeries> {
    if e <= 0 {
        return Err(Error::Domain(format!(
            "(q^{e};q)_inf has infinitely many non-unit factors; exponent must be >= 1"
        )));
    }
    let mut s = QSeries::one(order);
    for j in (e as usize)..=order {
        s.mul_binomial(&BigRat::one(), j);
    }
    Ok(s)
}

/// Multiplicative inverse to the same order; requires a nonzero constant
/// term.
pub fn series_invert(s: &QSeries) -> Result<QSeries> {
    let c0 = &s.coeffs[0];
    if c0.is_zero() {
        return Err(Error::NotInvertible);
    }
    let inv0 = c0.recip();
    let n = s.coeffs.len();
    let mut t: Vec<BigRat> = Vec::with_capacity(n);
    t.push(inv0.clone());
    for i in 1..n {
        let mut acc = BigRat::zero();
        for j in 1..=i {
            if !s.coeffs[j].is_zero() {
                acc += &s.coeffs[j] * &t[i - j];
            }
        }
        t.push(-acc * &inv0);
    }
    Ok(QSeries { coeffs: t })
}

/// `sum_j c_j q0^j`, exactly. Truncation error is the caller's business.
pub fn series_eval(s: &QSeries, q0: &BigRat) -> BigRat {
    s.coeffs.iter().rev().fold(BigRat::zero(), |acc, c| acc * q0 + c)
}
