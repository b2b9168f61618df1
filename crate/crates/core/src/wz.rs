//! The WZ pair behind the free-parameter q-identity.
//!
//! `F(n,k) = q^(k^2) [n,k]_q^2 / [2n,n]_q` and `G = R F` with the rational
//! certificate
//!
//! ```text
//! R(n,k) = q^(n+3) (1-q^k)^2 (q^(n+1) + q^(2n+2) - 2 q^k)
//!          / ((q^k - q^(n+1))^2 (1 + q^(n+1)) (1 - q^(2n+1)))
//! ```
//!
//! satisfy `q^2 F(n+1,k) - q^2 F(n,k) = G(n,k+1) - G(n,k)`. Substituting
//! `X = q^n`, `Y = q^k` turns every shift quotient of `F` and the
//! certificate itself into rational functions of `(Q, X, Y)`, so the
//! difference equation becomes an identity of rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    gaussian_binomial, ratfunc_equal, BigRat, Equality, MultiPoly, QSeries, RatFunc, UniPoly, Var,
};
use crate::numerics::{
    qpoch_num, qpoch_qpow, qpow, sum_until, EvalContext, HPReal, ShiftedInfProduct, Subscript,
};

/// How a check was carried out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckMode {
    ExactRatfunc,
    ExactSeries { order: usize },
    Numeric { digits: u32 },
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckMode::ExactRatfunc => write!(f, "exact-ratfunc"),
            CheckMode::ExactSeries { order } => write!(f, "exact-series(order {order})"),
            CheckMode::Numeric { digits } => write!(f, "numeric({digits} digits)"),
        }
    }
}

/// Pass/fail of a single check. A failure always carries a witness: a
/// nonzero monomial, a mismatching power of `q`, or a numeric discrepancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witness: Option<String>,
    pub mode: CheckMode,
}

impl CheckOutcome {
    pub fn pass(mode: CheckMode) -> Self {
        CheckOutcome { passed: true, witness: None, mode }
    }

    pub fn fail(mode: CheckMode, witness: impl Into<String>) -> Self {
        CheckOutcome { passed: false, witness: Some(witness.into()), mode }
    }
}

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

fn ratio(num: MultiPoly, den: MultiPoly) -> RatFunc {
    RatFunc::new(num, den).expect("nonzero denominator by construction")
}

/// The certificate with the constant in `q^(n+1) + q^(2n+2) - c q^k` left
/// as a parameter; `c = 2` is the genuine one.
pub fn certificate_with_constant(c: i64) -> RatFunc {
    let qx = &q() * &x();
    let num = &(&(&q().pow(3) * &x()) * &(&one() - &y()).pow(2))
        * &(&(&qx + &(&q().pow(2) * &x().pow(2))) - &y().scale(&BigRat::from_integer(c.into())));
    let den = &(&(&y() - &qx).pow(2) * &(&one() + &qx)) * &(&one() - &(&q() * &x().pow(2)));
    ratio(num, den)
}

/// `F(n+1,k) / F(n,k)`: `([n+1,k]/[n,k])^2 [2n,n]/[2n+2,n+1]`.
pub fn f_shift_n_ratio() -> RatFunc {
    let qx = &q() * &x();
    // [n+1,k]/[n,k] = (1 - q^(n+1)) / (1 - q^(n+1-k)) = (1 - QX) Y / (Y - QX)
    let binom = ratio(&(&one() - &qx) * &y(), &y() - &qx);
    // [2n+2,n+1]/[2n,n] = (1 - q^(2n+1)) (1 - q^(2n+2)) / (1 - q^(n+1))^2
    let central = ratio(
        (&one() - &qx).pow(2),
        &(&one() - &(&q() * &x().pow(2))) * &(&one() - &(&q().pow(2) * &x().pow(2))),
    );
    &binom.pow(2) * &central
}

/// `F(n,k+1) / F(n,k)`: `q^((k+1)^2 - k^2) ([n,k+1]/[n,k])^2`, where
/// `q^(2k+1) = Q Y^2` and `[n,k+1]/[n,k] = (Y - X) / (Y (1 - QY))`.
pub fn f_shift_k_ratio() -> RatFunc {
    let qyy = &q() * &y().pow(2);
    let binom = ratio(&y() - &x(), &y() * &(&one() - &(&q() * &y())));
    &RatFunc::from_poly(qyy) * &binom.pow(2)
}

/// A WZ pair `(F, G = R F)` with `F` fixed and the certificate `R`
/// replaceable, so that corrupted certificates can be shown to fail.
#[derive(Clone, Debug)]
pub struct WzPair {
    certificate: RatFunc,
}

impl Default for WzPair {
    fn default() -> Self {
        WzPair { certificate: certificate_with_constant(2) }
    }
}

impl WzPair {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_certificate(certificate: RatFunc) -> Self {
        WzPair { certificate }
    }

    pub fn certificate(&self) -> &RatFunc {
        &self.certificate
    }

    /// Both sides of the difference equation divided by `F(n,k)`:
    /// `A = q^2 (F(n+1,k)/F(n,k) - 1)` and
    /// `B = R(n,k+1) F(n,k+1)/F(n,k) - R(n,k)`.
    pub fn difference_sides(&self) -> (RatFunc, RatFunc) {
        let q2 = RatFunc::from_poly(q().pow(2));
        let a = &q2 * &(&f_shift_n_ratio() - &RatFunc::from_poly(one()));
        let b = &(&self.certificate.shift(Var::Y) * &f_shift_k_ratio()) - &self.certificate;
        (a, b)
    }

    pub fn certificate_identity_check(&self) -> CheckOutcome {
        let (a, b) = self.difference_sides();
        match ratfunc_equal(&a, &b) {
            Equality::Equal => CheckOutcome::pass(CheckMode::ExactRatfunc),
            Equality::Differ { monomial, coefficient } => CheckOutcome::fail(
                CheckMode::ExactRatfunc,
                format!("A - B has nonzero term {coefficient}*{monomial}"),
            ),
        }
    }

    /// Evaluates `A` and `B` exactly at `count` pseudo-random rational
    /// points `(Q, X, Y)`, skipping points on a pole of either side.
    pub fn random_point_check(&self, seed: u64, count: usize) -> CheckOutcome {
        let (a, b) = self.difference_sides();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        while checked < count {
            let mut draw = || BigRat::new(rng.random_range(-40i64..=40).into(), rng.random_range(1i64..=17).into());
            let (qv, xv, yv) = (draw(), draw(), draw());
            let (Ok(av), Ok(bv)) = (a.eval(&qv, &xv, &yv), b.eval(&qv, &xv, &yv)) else {
                continue;
            };
            if av != bv {
                return CheckOutcome::fail(
                    CheckMode::ExactRatfunc,
                    format!("A = {av} but B = {bv} at Q={qv}, X={xv}, Y={yv}"),
                );
            }
            checked += 1;
        }
        CheckOutcome::pass(CheckMode::ExactRatfunc)
    }

    /// Numeric `F(n,k)` and `G(n,k) = R(n,k) F(n,k)` at real `k`.
    ///
    /// The q-binomials use the infinite-product reading
    /// `1/(q;q)_x = (q^(x+1);q)_inf / (q;q)_inf`, which vanishes exactly for
    /// negative integer `x`. `k = n + 1` sits on the double pole of `R`.
    pub fn eval_pair(&self, n: u64, k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<(HPReal, HPReal)> {
        let f = f_value(n, k, q, ctx)?;
        let nk = BigRat::from_integer(n.into());
        if k == &(&nk + BigRat::one()) {
            return Err(Error::Pole(format!("certificate pole at k = n + 1 = {}", n + 1)));
        }
        let qn = qpow(q, &nk, ctx)?;
        let qk = qpow(q, k, ctx)?;
        let r_den = eval_poly(self.certificate.den(), q, &qn, &qk);
        if r_den.is_zero() {
            return Err(Error::Pole(format!("certificate denominator vanishes at n={n}, k={k}")));
        }
        let r = &eval_poly(self.certificate.num(), q, &qn, &qk) / &r_den;
        let g = &r * &f;
        Ok((f, g))
    }
}

fn eval_poly(p: &MultiPoly, q: &HPReal, x: &HPReal, y: &HPReal) -> HPReal {
    let digits = q.digits().max(x.digits()).max(y.digits());
    p.terms().fold(HPReal::zero(digits), |acc, (m, c)| {
        let term = &(&(&HPReal::from_rat(c, digits) * &q.powi(m.q as i64)) * &x.powi(m.x as i64)) * &y.powi(m.y as i64);
        &acc + &term
    })
}

/// `[n,k]_q` for real `k` as `(q;q)_n (q^(k+1);q)_inf (q^(n-k+1);q)_inf / (q;q)_inf^2`.
fn qbinomial_num(n: u64, k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let nk = BigRat::from_integer(n.into());
    let one = BigRat::one();
    let a = qpoch_qpow(&(k + &one), q, &Subscript::Infinite, ctx)?;
    let b = qpoch_qpow(&(&nk - k + &one), q, &Subscript::Infinite, ctx)?;
    if a.is_zero() || b.is_zero() {
        return Ok(HPReal::zero(ctx.working_digits()));
    }
    let top = qpoch_num(q, q, &Subscript::Finite(n), ctx)?;
    let full = qpoch_num(q, q, &Subscript::Infinite, ctx)?;
    Ok(&(&(&top * &a) * &b) / &full.square())
}

fn f_value(n: u64, k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let b = qbinomial_num(n, k, q, ctx)?;
    if b.is_zero() {
        return Ok(b);
    }
    let central = qbinomial_num(2 * n, &BigRat::from_integer(n.into()), q, ctx)?;
    Ok(&(&qpow(q, &(k * k), ctx)? * &b.square()) / &central)
}

/// Walks `G(n,k)` for `n = 0, 1, 2, ...` in the cancelled product form
///
/// ```text
/// G(n,k) = -q^(n+3-2k+k^2) (2q^k - q^(n+1) - q^(2n+2)) / (1 + q^(n+1))
///          (q;q)_n^4 (q^k;q)_inf^2 (q^(n-k+2);q)_inf^2 / ((q;q)_inf^4 (q;q)_(2n+1))
/// ```
///
/// obtained by cancelling `(q^k - q^(n+1))^2` against `[n,k]^2`; it has no
/// pole at `k = n + 1`.
pub struct GTerms {
    q: HPReal,
    qk: HPReal,
    qn: HPReal,
    prefactor: HPReal,
    ratio: HPReal,
    tail: ShiftedInfProduct,
    n: u64,
    wd: u32,
}

impl GTerms {
    pub fn new(k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<Self> {
        let wd = ctx.working_digits();
        let q = q.with_digits(wd.max(q.digits()));
        let two = BigRat::from_integer(2.into());
        let qk_inf = qpoch_qpow(k, &q, &Subscript::Infinite, ctx)?;
        let full = qpoch_num(&q, &q, &Subscript::Infinite, ctx)?;
        let e = BigRat::from_integer(3.into()) - &two * k + k * k;
        let prefactor = -(&(&qpow(&q, &e, ctx)? * &qk_inf.square()) / &full.powi(4));
        let ratio = &HPReal::one(wd) / &(HPReal::one(wd) - &q);
        Ok(GTerms {
            qk: qpow(&q, k, ctx)?,
            qn: HPReal::one(wd),
            prefactor,
            ratio,
            tail: ShiftedInfProduct::new(&(&two - k), &q, ctx)?,
            n: 0,
            wd,
            q,
        })
    }

    /// `G(n,k)` for the current `n`, then advances `n`.
    pub fn next_term(&mut self) -> Result<HPReal> {
        let one = HPReal::one(self.wd);
        let qn1 = &self.qn * &self.q;
        let q2n2 = qn1.square();
        let linear = &(&(&self.qk.mul_pow2(1) - &qn1) - &q2n2) / &(&one + &qn1);
        let g = &(&(&(&self.prefactor * &self.qn) * &linear) * &self.ratio) * &self.tail.value().square();

        // (q;q)_n^4/(q;q)_{2n+1}: multiply by (1-q^{n+1})^4 / ((1-q^{2n+2})(1-q^{2n+3}))
        let f1 = &one - &qn1;
        let q2n3 = &q2n2 * &self.q;
        self.ratio = &(&self.ratio * &f1.powi(4)) / &(&(&one - &q2n2) * &(&one - &q2n3));
        self.tail.step_up()?;
        self.qn = qn1;
        self.n += 1;
        Ok(g)
    }
}

/// `G(n,k)` from the cancelled product form; defined at `k = n + 1`.
pub fn g_value(n: u64, k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let mut walk = GTerms::new(k, q, ctx)?;
    for _ in 0..n {
        walk.next_term()?;
    }
    walk.next_term()
}

/// Closed form `H(k) = q^(k^2+2) ((q;q)_inf^3 - (q^(1-k);q)_inf^2) (q^(k+1);q)_inf^2 / (q;q)_inf^4`,
/// the limit of `q^2 F(m+1,k) - q^2 F(0,k)` as `m -> inf`.
pub fn h_closed(k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<HPReal> {
    let one = BigRat::one();
    let full = qpoch_num(q, q, &Subscript::Infinite, ctx)?;
    let low = qpoch_qpow(&(&one - k), q, &Subscript::Infinite, ctx)?;
    let high = qpoch_qpow(&(&one + k), q, &Subscript::Infinite, ctx)?;
    let e = k * k + BigRat::from_integer(2.into());
    let bracket = &full.powi(3) - &low.square();
    Ok(&(&(&qpow(q, &e, ctx)? * &bracket) * &high.square()) / &full.powi(4))
}

/// Verifies `sum_{k=0}^n q^(k^2) [n,k]^2 = [2n,n]` as polynomials.
pub fn qbinomial_sum_check(n: u32) -> CheckOutcome {
    let row = qbinomial_row(n);
    let mut lhs: Vec<BigInt> = Vec::new();
    for (k, b) in row.iter().enumerate() {
        let sq = int_poly_mul(b, b);
        let shift = k * k;
        if lhs.len() < shift + sq.len() {
            lhs.resize(shift + sq.len(), BigInt::zero());
        }
        for (i, c) in sq.into_iter().enumerate() {
            lhs[shift + i] += c;
        }
    }
    let rhs: Vec<BigInt> = gaussian_binomial(2 * n, n as i64)
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    let len = lhs.len().max(rhs.len());
    let at = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    match (0..len).find(|&i| at(&lhs, i) != at(&rhs, i)) {
        None => CheckOutcome::pass(CheckMode::ExactRatfunc),
        Some(i) => CheckOutcome::fail(CheckMode::ExactRatfunc, format!("n={n}: coefficients of q^{i} differ")),
    }
}

/// Row `[n,0]_q ..= [n,n]_q` by the q-Pascal rule
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
fn qbinomial_row(n: u32) -> Vec<Vec<BigInt>> {
    let mut row = vec![vec![BigInt::one()]];
    for m in 1..=n as usize {
        let mut next = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut c: Vec<BigInt> = if k > 0 { row[k - 1].clone() } else { Vec::new() };
            if k < m {
                let upper = &row[k];
                if c.len() < k + upper.len() {
                    c.resize(k + upper.len(), BigInt::zero());
                }
                for (i, u) in upper.iter().enumerate() {
                    c[k + i] += u;
                }
            }
            next.push(c);
        }
        row = next;
    }
    row
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Evaluation regime for [`telescoping_check`].
#[derive(Clone, Debug)]
pub enum TelescopeMode {
    ExactSeries { order: usize },
    Numeric { q: HPReal, ctx: EvalContext },
}

/// Checks `q^2 F(m+1,k) - q^2 F(0,k) = sum_{n=0}^m (G(n,k+1) - G(n,k))`.
///
/// The exact mode needs integer `k >= 0` and compares power series modulo
/// `q^(order+1)`; the numeric mode uses [`WzPair::eval_pair`], so a
/// certificate pole inside the range is an error.
pub fn telescoping_check(m: u64, k: &BigRat, mode: &TelescopeMode) -> Result<CheckOutcome> {
    let pair = WzPair::new();
    match mode {
        TelescopeMode::ExactSeries { order } => {
            if !k.is_integer() || k.is_negative() {
                return Err(Error::Domain(format!("exact telescoping needs integer k >= 0, got {k}")));
            }
            let k = k.to_integer().to_u64().ok_or_else(|| Error::Domain("k too large".into()))?;
            let order = *order;
            let lhs = &f_series(m + 1, k, order)?.shift_up(2) - &f_series(0, k, order)?.shift_up(2);
            let rhs = (0..=m).try_fold(QSeries::zero(order), |acc, n| -> Result<QSeries> {
                Ok(&acc + &(&g_series(n, k + 1, order)? - &g_series(n, k, order)?))
            })?;
            let mode = CheckMode::ExactSeries { order };
            Ok(match lhs.first_mismatch(&rhs) {
                None => CheckOutcome::pass(mode),
                Some(i) => CheckOutcome::fail(
                    mode,
                    format!("coefficient of q^{i}: {} vs {}", lhs.coeff(i), rhs.coeff(i)),
                ),
            })
        }
        TelescopeMode::Numeric { q, ctx } => {
            crate::numerics::qpoch_num(q, q, &Subscript::Finite(0), ctx)?; // validates q
            let q2 = q.square();
            let f_end = pair.eval_pair(m + 1, k, q, ctx)?.0;
            let f_start = pair.eval_pair(0, k, q, ctx)?.0;
            let lhs = &q2 * &(&f_end - &f_start);
            let k1 = k + BigRat::one();
            let mut rhs = HPReal::zero(ctx.working_digits());
            for n in 0..=m {
                let upper = pair.eval_pair(n, &k1, q, ctx)?.1;
                let lower = pair.eval_pair(n, k, q, ctx)?.1;
                rhs = &rhs + &(&upper - &lower);
            }
            Ok(numeric_outcome(&lhs, &rhs, &HPReal::zero(ctx.working_digits()), ctx))
        }
    }
}

fn numeric_outcome(lhs: &HPReal, rhs: &HPReal, bound: &HPReal, ctx: &EvalContext) -> CheckOutcome {
    let mode = CheckMode::Numeric { digits: ctx.target_digits };
    let diff = (lhs - rhs).abs();
    let scale = lhs.abs().max(HPReal::one(ctx.working_digits()));
    if diff < &(&ctx.tolerance() * &scale) + bound {
        CheckOutcome::pass(mode)
    } else {
        CheckOutcome::fail(
            mode,
            format!(
                "lhs {} vs rhs {} (|diff| = {})",
                lhs.to_decimal_string(ctx.target_digits),
                rhs.to_decimal_string(ctx.target_digits),
                diff.to_decimal_string(4)
            ),
        )
    }
}

/// Checks the closed form `H(k)` against `sum_n (G(n,k+1) - G(n,k))`.
pub fn h_identity_check(k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<CheckOutcome> {
    crate::numerics::qpoch_num(q, q, &Subscript::Finite(0), ctx)?;
    let closed = h_closed(k, q, ctx)?;
    let series = g_difference_sum(k, q, ctx)?;
    Ok(numeric_outcome(&closed, &series.value, &series.bound, ctx))
}

/// `sum_{n>=0} (G(n,k+1) - G(n,k))` through the summation engine.
pub fn g_difference_sum(k: &BigRat, q: &HPReal, ctx: &EvalContext) -> Result<crate::numerics::Approx> {
    let mut upper = GTerms::new(&(k + BigRat::one()), q, ctx)?;
    let mut lower = GTerms::new(k, q, ctx)?;
    sum_until(|_| Ok(&upper.next_term()? - &lower.next_term()?), ctx)
}

fn f_series(n: u64, k: u64, order: usize) -> Result<QSeries> {
    let n32 = u32::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    let b = QSeries::from_poly(&gaussian_binomial(n32, k as i64), order);
    if b.is_zero() {
        return Ok(b);
    }
    let central = QSeries::from_poly(&gaussian_binomial(2 * n32, n as i64), order).invert()?;
    let qk2 = QSeries::monomial(BigRat::one(), (k * k) as usize, order);
    Ok(&(&qk2 * &(&b * &b)) * &central)
}

/// `G(n,k)` for integer `k` as an exact power series, from the cancelled
/// product form (see [`GTerms`]).
pub fn g_series(n: u64, k: u64, order: usize) -> Result<QSeries> {
    if k == 0 || n + 1 < k {
        // 1/(q;q)_{k-1} or 1/(q;q)_{n-k+1} has a negative subscript
        return Ok(QSeries::zero(order));
    }
    let e = (n + 3 + k * k) - 2 * k;
    let mut s = QSeries::monomial(-BigRat::one(), e as usize, order);
    let lin = &(&UniPoly::monomial(BigRat::from_integer(2.into()), k as usize)
        - &UniPoly::monomial(BigRat::one(), (n + 1) as usize))
        - &UniPoly::monomial(BigRat::one(), (2 * n + 2) as usize);
    s = &s * &QSeries::from_poly(&lin, order);
    let one = BigRat::one();
    s.div_binomial(&-one.clone(), (n + 1) as usize)?;
    for j in 1..=n {
        for _ in 0..4 {
            s.mul_binomial(&one, j as usize);
        }
    }
    for j in 1..k {
        for _ in 0..2 {
            s.div_binomial(&one, j as usize)?;
        }
    }
    for j in 1..=(2 * n + 1) {
        s.div_binomial(&one, j as usize)?;
    }
    for j in 1..=(n + 1 - k) {
        for _ in 0..2 {
            s.div_binomial(&one, j as usize)?;
        }
    }
    Ok(s)
}

/// [`WzPair::certificate_identity_check`] for the genuine certificate.
pub fn certificate_identity_check() -> CheckOutcome {
    WzPair::new().certificate_identity_check()
}
