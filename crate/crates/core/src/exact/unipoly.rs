use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::BigRat;

/// Dense polynomial in `q` with exact rational coefficients.
///
/// The coefficient vector is trimmed, so the leading coefficient is nonzero
/// unless the polynomial is zero (empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^e`
    pub fn monomial(c: BigRat, e: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); e + 1];
        coeffs[e] = c;
        Self::from_coeffs(coeffs)
    }

    /// `1 - c q^e`
    pub fn binomial(c: BigRat, e: usize) -> Self {
        Self::one() - Self::monomial(c, e)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// Coefficient of `q^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs.iter().rev().fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = &divisor.coeffs[d];
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRat::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(d);
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Divides by `1 - q^e` (`e >= 1`) in linear time, returning quotient and
    /// remainder exactly as [`UniPoly::div_rem`] would.
    pub fn div_rem_one_minus_qpow(&self, e: usize) -> (UniPoly, UniPoly) {
        assert!(e >= 1);
        let n = self.coeffs.len();
        if n <= e {
            return (UniPoly::zero(), self.clone());
        }
        // self = (1 - q^e) t + r, deg r < e. Peel from the top:
        // t_{i} = -(s_{i+e} - t_{i+e})  ... written as t_i = t_{i+e} - s_{i+e}.
        let qlen = n - e;
        let mut quot = vec![BigRat::zero(); qlen];
        for i in (0..qlen).rev() {
            let upper = if i + e < qlen { quot[i + e].clone() } else { BigRat::zero() };
            quot[i] = upper - &self.coeffs[i + e];
        }
        let rem: Vec<BigRat> = (0..e)
            .map(|i| {
                let t = if i < qlen { quot[i].clone() } else { BigRat::zero() };
                &self.coeffs[i] - t
            })
            .collect();
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

fn mul_integral(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let ai: Vec<BigInt> = a.iter().map(|c| c.numer().clone()).collect();
    let bi: Vec<BigInt> = b.iter().map(|c| c.numer().clone()).collect();
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in ai.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in bi.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out.into_iter().map(BigRat::from_integer).collect()
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        if self.is_integral() && rhs.is_integral() {
            return UniPoly::from_coeffs(mul_integral(&self.coeffs, &rhs.coeffs));
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate())
    }
}

pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, &'a BigRat)>,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in terms {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let abs = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        match (i, abs.is_one()) {
            (0, _) => write!(f, "{abs}")?,
            (1, true) => write!(f, "q")?,
            (1, false) => write!(f, "{abs}*q")?,
            (_, true) => write!(f, "q^{i}")?,
            (_, false) => write!(f, "{abs}*q^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// `prod_{j=0}^{m-1} (1 - q^{e+j})`, i.e. `(q^e; q)_m` as a polynomial.
pub fn qpoch_finite_poly(e: u32, m: u32) -> UniPoly {
    (0..m).fold(UniPoly::one(), |acc, j| {
        &acc * &UniPoly::binomial(BigRat::one(), (e + j) as usize)
    })
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_{n-k})`; zero when `k < 0` or
/// `k > n`.
///
/// Computed by dividing `(q;q)_n` by each factor `1 - q^j` of the
/// denominator in turn. Every division must leave a zero remainder.
pub fn gaussian_binomial(n: u32, k: i64) -> UniPoly {
    if k < 0 || k > n as i64 {
        return UniPoly::zero();
    }
    let k = k as u32;
    let mut acc = qpoch_finite_poly(1, n);
    for j in (1..=k).chain(1..=n - k) {
        let (q, r) = acc.div_rem_one_minus_qpow(j as usize);
        assert!(r.is_zero(), "(q;q)_{n} not divisible at factor 1-q^{j}");
        acc = q;
    }
    acc
}
