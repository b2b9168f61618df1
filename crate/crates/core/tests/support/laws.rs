//! Module invariants as seeded randomized laws. Each law returns `Err`
//! with the failing case instead of panicking, so the acceptance target can
//! report it on one line.
#![allow(dead_code)]

use std::fmt::Debug;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use qwz_core::exact::*;
use qwz_core::identities::*;
use qwz_core::numerics::*;
use qwz_core::wz::*;

pub const CASES: u32 = 200;
const SEED: [u8; 32] = *b"qwz property suite, fixed seed!!";

pub fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn check<S>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

// exact algebra

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn multipoly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((small_rat(), 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(), |acc, (c, a, b, d)| &acc + &MultiPoly::term(c, Monomial::new(a, b, d)))
    })
}

fn nonzero_multipoly() -> impl Strategy<Value = MultiPoly> {
    multipoly().prop_filter("nonzero", |p| !p.is_zero())
}

fn qseries(order: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(small_rat(), order + 1).prop_map(QSeries::from_coeffs)
}

pub fn multipoly_ring_laws() -> Result<(), String> {
    check((multipoly(), multipoly(), multipoly()), |(a, b, c)| {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        Ok(())
    })
}

pub fn qseries_ring_laws() -> Result<(), String> {
    check((qseries(12), qseries(12), qseries(12)), |(a, b, c)| {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        Ok(())
    })
}

pub fn gaussian_binomial_symmetry() -> Result<(), String> {
    for n in 0..=30u32 {
        for k in 0..=n as i64 {
            ensure(gaussian_binomial(n, k) == gaussian_binomial(n, n as i64 - k), || format!("n={n} k={k}"))?;
        }
    }
    Ok(())
}

pub fn gaussian_binomial_nonnegative_degree() -> Result<(), String> {
    for n in 0..=30u32 {
        for k in 0..=n as i64 {
            let b = gaussian_binomial(n, k);
            let ok = b.coeffs().iter().all(|c| c.is_integer() && *c >= rat(0, 1))
                && b.degree() == Some((k * (n as i64 - k)) as usize);
            ensure(ok, || format!("n={n} k={k}: {b}"))?;
        }
    }
    Ok(())
}

pub fn pochhammer_splitting() -> Result<(), String> {
    for m in 0..=20u32 {
        for n in 0..=20u32 {
            let whole = qpoch_finite_poly(1, m + n);
            let split = &qpoch_finite_poly(1, m) * &qpoch_finite_poly(1 + m, n);
            ensure(whole == split, || format!("m={m} n={n}"))?;
        }
    }
    Ok(())
}

pub fn truncation_coherence() -> Result<(), String> {
    check((1i64..=8, 0usize..=80).prop_flat_map(|(e, n)| (Just(e), Just(n), 0..=n)), |(e, n, m)| {
        let big = qpoch_inf_series(e, n).map_err(|x| fail(x.to_string()))?;
        let small = qpoch_inf_series(e, m).map_err(|x| fail(x.to_string()))?;
        prop_assert_eq!(big.truncate(m), small);
        Ok(())
    })
}

pub fn ratfunc_equivalence() -> Result<(), String> {
    let strat = (multipoly(), nonzero_multipoly(), nonzero_multipoly(), nonzero_multipoly());
    check(strat, |(p, d, f, g)| {
        let r = |n: MultiPoly, m: MultiPoly| RatFunc::new(n, m).map_err(|e| fail(e.to_string()));
        let r1 = r(p.clone(), d.clone())?;
        let r2 = r(&p * &f, &d * &f)?;
        let r3 = r(&(&p * &f) * &g, &(&d * &f) * &g)?;
        prop_assert!(ratfunc_equal(&r1, &r1).is_equal());
        prop_assert_eq!(ratfunc_equal(&r1, &r2).is_equal(), ratfunc_equal(&r2, &r1).is_equal());
        prop_assert!(ratfunc_equal(&r1, &r2).is_equal() && ratfunc_equal(&r2, &r3).is_equal());
        prop_assert!(ratfunc_equal(&r1, &r3).is_equal());
        let shifted = r(&p + &d, d.clone())?;
        prop_assert!(!ratfunc_equal(&r1, &shifted).is_equal());
        Ok(())
    })
}

// numerics

fn ulp_close(lo: &HPReal, hi: &HPReal, digits: u32) -> bool {
    let diff = (lo - hi).abs();
    if diff.is_zero() {
        return true;
    }
    let e10 = hi.log10_abs().floor() as i64;
    diff <= HPReal::pow10(e10 - digits as i64 + 1, digits + 10)
}

#[derive(Clone, Debug)]
enum NumOp {
    Pi,
    Exp(i64),
    Ln(i64),
    Sin(i64),
    QPochInf(i64, i64),
    Trigamma(i64),
    Zeta3,
}

fn eval_op(op: &NumOp, ctx: &EvalContext) -> qwz_core::Result<HPReal> {
    let milli = |v: i64| ctx.lift(&rat(v, 1000));
    match op {
        NumOp::Pi => Ok(hp_constant_pi(ctx)),
        NumOp::Exp(x) => hp_transcendental(Transcendental::Exp, &milli(*x), ctx),
        NumOp::Ln(x) => hp_transcendental(Transcendental::Ln, &milli(*x), ctx),
        NumOp::Sin(x) => hp_transcendental(Transcendental::Sin, &milli(*x), ctx),
        NumOp::QPochInf(a, q) => qpoch_num(&milli(*a), &milli(*q), &Subscript::Infinite, ctx),
        NumOp::Trigamma(k) => trigamma_num(&milli(*k), ctx),
        NumOp::Zeta3 => zeta3_num(ctx),
    }
}

pub fn precision_monotonicity() -> Result<(), String> {
    let op = prop_oneof![
        Just(NumOp::Pi),
        (-5000i64..5000).prop_map(NumOp::Exp),
        (10i64..10_000).prop_map(NumOp::Ln),
        (-4000i64..4000).prop_filter("nonzero", |x| *x != 0).prop_map(NumOp::Sin),
        (1i64..1000, 50i64..900).prop_map(|(a, q)| NumOp::QPochInf(a, q)),
        (50i64..3000).prop_map(NumOp::Trigamma),
        Just(NumOp::Zeta3),
    ];
    check((op, 10u32..=40), |(op, d)| {
        let lo = eval_op(&op, &EvalContext::new(d)).map_err(|e| fail(e.to_string()))?;
        let hi = eval_op(&op, &EvalContext::new(d + 15)).map_err(|e| fail(e.to_string()))?;
        prop_assert!(ulp_close(&lo, &hi, d), "{} vs {}", lo.to_decimal_string(d), hi.to_decimal_string(d));
        Ok(())
    })
}

pub fn pochhammer_quotient_law() -> Result<(), String> {
    check((50i64..=900, 1i64..1000, 0u64..=50, 15u32..=30), |(q, a, n, d)| {
        let ctx = EvalContext::new(d);
        let (qh, ah) = (ctx.lift(&rat(q, 1000)), ctx.lift(&rat(a, 1000)));
        let e = |r: qwz_core::Result<HPReal>| r.map_err(|x| fail(x.to_string()));
        let fin = e(qpoch_num(&ah, &qh, &Subscript::Finite(n), &ctx))?;
        let aqn = &ah * &e(qpow(&qh, &rat(n as i64, 1), &ctx))?;
        let quot = &e(qpoch_num(&ah, &qh, &Subscript::Infinite, &ctx))? / &e(qpoch_num(&aqn, &qh, &Subscript::Infinite, &ctx))?;
        prop_assert!((&fin - &quot).abs() < HPReal::pow10(-(d as i64), d + 10));
        Ok(())
    })
}

pub fn general_subscript_consistency() -> Result<(), String> {
    check((50i64..=900, -999i64..1000, 0i64..=40, 15u32..=30), |(q, a, x, d)| {
        let ctx = EvalContext::new(d);
        let (qh, ah) = (ctx.lift(&rat(q, 1000)), ctx.lift(&rat(a, 1000)));
        let fin = qpoch_num(&ah, &qh, &Subscript::Finite(x as u64), &ctx).map_err(|e| fail(e.to_string()))?;
        let gen = qpoch_num(&ah, &qh, &Subscript::General(rat(x, 1)), &ctx).map_err(|e| fail(e.to_string()))?;
        prop_assert!((&fin - &gen).abs() < &ctx.tolerance() * &fin.abs().max(ctx.int(1)), "{fin} vs {gen}");
        Ok(())
    })
}

pub fn sum_until_within_bound() -> Result<(), String> {
    let ratio = (-95i64..=95).prop_filter("nonzero", |p| *p != 0);
    check((ratio, 10u32..=40), |(p, d)| {
        let ctx = EvalContext::new(d);
        let r = ctx.lift(&rat(p, 100));
        let mut t = ctx.int(1);
        let s = sum_until(
            |i| {
                if i > 0 {
                    t = &t * &r;
                }
                Ok(t.clone())
            },
            &ctx,
        )
        .map_err(|e| fail(e.to_string()))?;
        let exact = ctx.lift(&(rat(1, 1) / (rat(1, 1) - rat(p, 100))));
        let slack = &s.bound + &(&ctx.epsilon() * &exact.abs());
        prop_assert!((&s.value - &exact).abs() <= slack, "p={} diff={}", p, (&s.value - &exact).abs());
        Ok(())
    })
}

pub fn trigamma_recurrence_and_reflection() -> Result<(), String> {
    check((1i64..1000, 10u32..=40), |(k, d)| {
        let ctx = EvalContext::new(d);
        let kh = ctx.lift(&rat(k, 1000));
        let a = trigamma_num(&kh, &ctx).map_err(|e| fail(e.to_string()))?;
        let b = trigamma_num(&(&kh + 1i64), &ctx).map_err(|e| fail(e.to_string()))?;
        let inv_sq = &ctx.int(1) / &kh.square();
        prop_assert!((&(&a - &b) - &inv_sq).abs() < &ctx.tolerance() * &a);
        let pi = hp_constant_pi(&ctx);
        let s = (&(&pi * &kh).sin() / &pi).square();
        let v = &a * &s;
        prop_assert!(v.is_positive() && v < ctx.int(1), "k={k}: {v}");
        Ok(())
    })
}

// wz

pub fn certificate_random_points() -> Result<(), String> {
    let pair = WzPair::new();
    ensure(pair.certificate_identity_check().passed, || "exact certificate check failed".into())?;
    check(any::<u64>(), |seed| {
        let o = pair.random_point_check(seed, 1);
        prop_assert!(o.passed, "{:?}", o.witness);
        Ok(())
    })
}

pub fn degenerate_integer_range() -> Result<(), String> {
    check((1u64..=4, 0u64..=4, 10usize..=40, 20i64..=80), |(k, m, order, q)| {
        let ctx = EvalContext::new(20);
        let qh = ctx.lift(&rat(q, 100));
        for n in 0..k.saturating_sub(1) {
            let (f, _) = WzPair::new().eval_pair(n, &rat(k as i64, 1), &qh, &ctx).map_err(|e| fail(e.to_string()))?;
            prop_assert!(f.is_zero(), "F({n},{k}) = {f}");
        }
        let o = telescoping_check(m, &rat(k as i64, 1), &TelescopeMode::ExactSeries { order })
            .map_err(|e| fail(e.to_string()))?;
        prop_assert!(o.passed, "{:?}", o.witness);
        Ok(())
    })
}

fn g_sum(k: &BigRat, q: &HPReal, ctx: &EvalContext) -> qwz_core::Result<Approx> {
    let mut walker = GTerms::new(k, q, ctx)?;
    sum_until(|_| walker.next_term(), ctx)
}

pub fn double_telescoping() -> Result<(), String> {
    check((1i64..=99, 20i64..=70, 0i64..=5), |(k, q, m)| {
        let ctx = EvalContext::new(20);
        let (kr, qh) = (rat(k, 100), ctx.lift(&rat(q, 100)));
        let e = |x: qwz_core::Error| fail(x.to_string());
        let mut lhs = HPReal::zero(ctx.working_digits());
        for j in 0..=m {
            lhs = &lhs + &h_closed(&(&kr + rat(j, 1)), &qh, &ctx).map_err(e)?;
        }
        let top = g_sum(&(&kr + rat(m + 1, 1)), &qh, &ctx).map_err(e)?;
        let bottom = g_sum(&kr, &qh, &ctx).map_err(e)?;
        let rhs = &top.value - &bottom.value;
        let slack = &(&ctx.tolerance() * &lhs.abs().max(ctx.int(1))) + &(&top.bound + &bottom.bound);
        prop_assert!((&lhs - &rhs).abs() < slack, "{lhs} vs {rhs}");
        Ok(())
    })
}

pub fn g_monotone_decay() -> Result<(), String> {
    check((0u64..=5, 1i64..=99, 10i64..=60), |(n, k, q)| {
        let ctx = EvalContext::new(20);
        let qh = ctx.lift(&rat(q, 100));
        let mut prev: Option<HPReal> = None;
        for m in 2..=40i64 {
            let g = g_value(n, &(rat(k, 100) + rat(m + 1, 1)), &qh, &ctx).map_err(|e| fail(e.to_string()))?.abs();
            if let Some(p) = &prev {
                prop_assert!(&g < p, "not decreasing at m={m}");
            }
            prev = Some(g);
        }
        if n >= 1 {
            prop_assert!(prev.unwrap() < HPReal::pow10(-20, 30));
        }
        Ok(())
    })
}

// identities

const NUMERIC_IDS: [&str; 9] = [
    "guillera_pi2",
    "ramanujan_4pi",
    "hks1",
    "hks2",
    "main_theorem",
    "partition_gf",
    "classical_limit_trigamma",
    "pi_k_half",
    "zeta3_harmonic",
];

fn numeric_case() -> impl Strategy<Value = (&'static str, Params)> {
    (prop::sample::select(NUMERIC_IDS.to_vec()), 5i64..=80, 1i64..=99).prop_map(|(id, q, k)| {
        let d = lookup(id).expect("registered");
        let specs = d.params(Mode::Numeric);
        let mut p = Params::new();
        for s in specs {
            match s.name {
                ParamName::Q => p = p.with_q(rat(q, 100)),
                ParamName::K => p = p.with_k(rat(k, 100)),
            }
        }
        (id, p)
    })
}

pub fn independence_of_sides() -> Result<(), String> {
    check((numeric_case(), 10u32..=30), |((id, p), d)| {
        let ctx = EvalContext::new(d);
        let sides = lookup(id).unwrap().numeric.as_ref().unwrap();
        let e = |x: qwz_core::Error| fail(x.to_string());
        let lhs_alone = (sides.lhs)(&p, &ctx).map_err(e)?.value;
        let rhs_after = (sides.rhs)(&p, &ctx).map_err(e)?.value;
        let lhs_after = (sides.lhs)(&p, &ctx).map_err(e)?.value;
        let rhs_again = (sides.rhs)(&p, &ctx).map_err(e)?.value;
        prop_assert!(lhs_alone == lhs_after && rhs_after == rhs_again);
        Ok(())
    })
}

fn abs_diff(r: &VerificationReport) -> f64 {
    r.abs_diff_or_first_mismatch.as_deref().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN)
}

pub fn digit_scaling() -> Result<(), String> {
    check((numeric_case(), 15u32..=30), |((id, p), d)| {
        let lo = verify_numeric(id, &p, &EvalContext::new(d)).map_err(|e| fail(e.to_string()))?;
        let hi = verify_numeric(id, &p, &EvalContext::new(d + 10)).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(lo.status, Status::Pass);
        prop_assert_eq!(hi.status, Status::Pass);
        let (a, b) = (abs_diff(&lo), abs_diff(&hi));
        prop_assert!(b <= (a * 1e-5).max(10f64.powi(-(d as i32) - 15)), "{id} D={d}: {a:e} -> {b:e}");
        Ok(())
    })
}

pub fn hks1_series_numeric_coherence() -> Result<(), String> {
    let p = Params::new();
    let lhs_s = qseries::hks1_lhs_series(&p, 100).map_err(|e| e.to_string())?;
    let rhs_s = qseries::hks1_rhs_series(&p, 100).map_err(|e| e.to_string())?;
    let ctx = EvalContext::new(100);
    let limit = HPReal::pow10(-95, 110);
    for j in 1..=CASES as i64 {
        let q = rat(j, 2000);
        let params = Params::new().with_q(q.clone());
        for (series, side) in [(&lhs_s, qseries::hks1_lhs as SideFn), (&rhs_s, qseries::hks1_rhs)] {
            let exact = ctx.lift(&series_eval(series, &q));
            let numeric = side(&params, &ctx).map_err(|e| e.to_string())?.value;
            ensure((&exact - &numeric).abs() < limit, || format!("q={q}: {exact} vs {numeric}"))?;
        }
    }
    Ok(())
}

pub fn trigamma_termwise() -> Result<(), String> {
    check((1i64..1000, 15u32..=40), |(k, d)| {
        let r = classical::reflection_termwise(&rat(k, 1000), 50, &EvalContext::new(d));
        prop_assert_eq!(r, None);
        Ok(())
    })
}

pub fn pi_k_half_is_pi() -> Result<(), String> {
    check(10u32..=80, |d| {
        let ctx = EvalContext::new(d);
        let v = classical::pi_k_half_lhs(&Params::new(), &ctx).map_err(|e| fail(e.to_string()))?.value;
        let pi = hp_constant_pi(&ctx);
        prop_assert!((&v - &pi).abs() < ctx.tolerance());
        Ok(())
    })
}

pub type Law = (&'static str, fn() -> Result<(), String>);

pub const EXACT_LAWS: &[Law] = &[
    ("multipoly ring laws", multipoly_ring_laws),
    ("qseries ring laws", qseries_ring_laws),
    ("gaussian binomial symmetry", gaussian_binomial_symmetry),
    ("gaussian binomial nonnegativity and degree", gaussian_binomial_nonnegative_degree),
    ("pochhammer splitting", pochhammer_splitting),
    ("series truncation coherence", truncation_coherence),
    ("ratfunc_equal equivalence", ratfunc_equivalence),
];

pub const NUMERIC_LAWS: &[Law] = &[
    ("precision monotonicity", precision_monotonicity),
    ("pochhammer quotient law", pochhammer_quotient_law),
    ("general subscript consistency", general_subscript_consistency),
    ("sum_until within bound", sum_until_within_bound),
    ("trigamma recurrence and reflection", trigamma_recurrence_and_reflection),
];

pub const WZ_LAWS: &[Law] = &[
    ("certificate at random points", certificate_random_points),
    ("degenerate integer range", degenerate_integer_range),
    ("double telescoping", double_telescoping),
    ("G monotone decay", g_monotone_decay),
];

pub const IDENTITY_LAWS: &[Law] = &[
    ("independence of sides", independence_of_sides),
    ("digit scaling", digit_scaling),
    ("hks1 series/numeric coherence", hks1_series_numeric_coherence),
    ("trigamma termwise reflection", trigamma_termwise),
    ("pi_k_half equals pi", pi_k_half_is_pi),
];
