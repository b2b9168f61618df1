use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::BigRat;
use crate::error::{Error, Result};

/// The three formal variables: `Q` is the base `q` itself, `X` stands for
/// `q^n` and `Y` for `q^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Q,
    X,
    Y,
}

/// Exponent triple `Q^q X^x Y^y`, ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub q: u32,
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, x: 0, y: 0 };

    pub fn new(q: u32, x: u32, y: u32) -> Self {
        Monomial { q, x, y }
    }

    pub fn degree(&self) -> u32 {
        self.q + self.x + self.y
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial::new(self.q + o.q, self.x + o.x, self.y + o.y)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then((self.q, self.x, self.y).cmp(&(other.q, other.x, other.y)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("Q", self.q), ("X", self.x), ("Y", self.y)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Sparse polynomial in `Q, X, Y` over the rationals. Zero coefficients are
/// never stored, so equal polynomials have identical term maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRat::from_integer(c.into()))
    }

    pub fn term(c: BigRat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::Q => Monomial::new(1, 0, 0),
            Var::X => Monomial::new(0, 1, 0),
            Var::Y => Monomial::new(0, 0, 1),
        };
        Self::term(BigRat::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(Monomial, BigRat)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c.clone()))
    }

    fn add_term(&mut self, m: Monomial, c: BigRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        (0..k).fold(MultiPoly::one(), |acc, _| &acc * self)
    }

    /// Replaces `v` by `Q * v`, the effect of shifting `n` (for `X`) or `k`
    /// (for `Y`) by one.
    pub fn shift(&self, v: Var) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let bump = match v {
                    Var::Q => 0,
                    Var::X => m.x,
                    Var::Y => m.y,
                };
                let mut m2 = *m;
                m2.q += bump;
                (m2, c.clone())
            })
            .collect();
        MultiPoly { terms }
    }

    pub fn eval(&self, q: &BigRat, x: &BigRat, y: &BigRat) -> BigRat {
        self.terms.iter().fold(BigRat::zero(), |acc, (m, c)| {
            acc + c * num_traits::pow(q.clone(), m.q as usize)
                * num_traits::pow(x.clone(), m.x as usize)
                * num_traits::pow(y.clone(), m.y as usize)
        })
    }

    /// Divides out the rational content so that the coefficients become
    /// coprime integers with a positive leading coefficient.
    pub fn primitive_part(&self) -> MultiPoly {
        use num_integer::Integer;
        let Some((_, lead)) = self.leading_term() else {
            return MultiPoly::zero();
        };
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRat::new(num_gcd, den_lcm);
        if lead.is_negative() {
            content = -content;
        }
        self.scale(&content.recip())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRat::one())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $f(self, rhs: $ty) -> $ty {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(MultiPoly, Add add, Sub sub, Mul mul);
forward_owned!(RatFunc, Add add, Sub sub, Mul mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            match (abs.is_one(), *m == Monomial::ONE) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{m}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of two [`MultiPoly`]s with a nonzero denominator. No GCD is
/// taken; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    // Content removal only: keeps coefficients small without any GCD.
    fn normalized(self) -> Self {
        let Some((_, lead)) = self.den.leading_term() else {
            return self;
        };
        let den = self.den.primitive_part();
        let factor = den.leading_term().expect("nonzero denominator").1 / lead;
        RatFunc { num: self.num.scale(&factor), den }
    }

    pub fn recip(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        RatFunc { num: self.num.pow(k), den: self.den.pow(k) }.normalized()
    }

    pub fn shift(&self, v: Var) -> Self {
        RatFunc { num: self.num.shift(v), den: self.den.shift(v) }.normalized()
    }

    /// Exact value at a rational point; a vanishing denominator is a pole.
    pub fn eval(&self, q: &BigRat, x: &BigRat, y: &BigRat) -> Result<BigRat> {
        let d = self.den.eval(q, x, y);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at Q={q}, X={x}, Y={y}")));
        }
        Ok(self.num.eval(q, x, y) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc { num: &self.num + &rhs.num, den: self.den.clone() }.normalized();
        }
        RatFunc {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.normalized()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Outcome of [`ratfunc_equal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal,
    /// A nonzero term of `num1*den2 - num2*den1`.
    Differ { monomial: Monomial, coefficient: BigRat },
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal)
    }
}

/// Decides `r1 == r2` by checking that `r1.num*r2.den - r2.num*r1.den` is the
/// zero polynomial.
pub fn ratfunc_equal(r1: &RatFunc, r2: &RatFunc) -> Equality {
    let diff = &(&r1.num * &r2.den) - &(&r2.num * &r1.den);
    match diff.leading_term() {
        None => Equality::Equal,
        Some((monomial, coefficient)) => Equality::Differ { monomial, coefficient },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q() -> MultiPoly {
        MultiPoly::var(Var::Q)
    }
    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(Var::Y)
    }
    fn one() -> MultiPoly {
        MultiPoly::one()
    }

    #[test]
    fn common_factor_cancels() {
        let a = RatFunc::new(x(), y()).unwrap();
        let b = RatFunc::new(&q() * &x(), &q() * &y()).unwrap();
        assert_eq!(ratfunc_equal(&a, &b), Equality::Equal);
    }

    #[test]
    fn factorization_is_recognised() {
        let a = RatFunc::new(&one() - &x().pow(2), &one() - &x()).unwrap();
        let b = RatFunc::from_poly(&one() + &x());
        assert!(ratfunc_equal(&a, &b).is_equal());
    }

    #[test]
    fn inequality_reports_witness() {
        let a = RatFunc::from_poly(&one() + &x());
        let b = RatFunc::from_poly(&one() + &y());
        match ratfunc_equal(&a, &b) {
            Equality::Differ { coefficient, .. } => assert!(!coefficient.is_zero()),
            Equality::Equal => panic!("expected a witness"),
        }
    }

    #[test]
    fn zero_denominator_is_domain_error() {
        assert!(matches!(RatFunc::new(one(), MultiPoly::zero()), Err(Error::Domain(_))));
        assert!(RatFunc::from_poly(MultiPoly::zero()).recip().is_err());
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(0, 0, 2);
        let b = Monomial::new(1, 0, 0);
        let c = Monomial::new(1, 1, 0);
        assert!(b < a && a < c);
        assert_eq!((&(&x() + &y()) * &q()).leading_term().unwrap().0, Monomial::new(1, 1, 0));
    }

    #[test]
    fn shift_multiplies_by_q_power() {
        // Y^2 X -> Q^2 Y^2 X under Y -> QY
        let p = &y().pow(2) * &x();
        assert_eq!(p.shift(Var::Y), MultiPoly::term(rat(1, 1), Monomial::new(2, 1, 2)));
        assert_eq!(p.shift(Var::X), MultiPoly::term(rat(1, 1), Monomial::new(1, 1, 2)));
    }

    #[test]
    fn eval_detects_pole() {
        let r = RatFunc::new(one(), &y() - &x()).unwrap();
        assert!(matches!(r.eval(&rat(1, 2), &rat(1, 3), &rat(1, 3)), Err(Error::Pole(_))));
        assert_eq!(r.eval(&rat(1, 2), &rat(1, 3), &rat(1, 2)).unwrap(), rat(6, 1));
    }
}
