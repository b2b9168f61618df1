//! Registry of named identities and the verification drivers.
//!
//! Every identity has independent evaluators for its two sides. A numeric
//! verification passes when `|lhs - rhs| < 10^-D` plus both reported tail
//! bounds; an exact-series verification compares all coefficients through
//! the requested order; a trend check follows a scaled quantity towards its
//! `q -> 1` limit.

pub mod classical;
pub mod qseries;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{BigRat, QSeries};
use crate::numerics::{Approx, EvalContext, HPReal};

/// Verification regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Numeric,
    ExactSeries,
    Trend,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Numeric => "numeric",
            Mode::ExactSeries => "exact-series",
            Mode::Trend => "trend",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "numeric" => Ok(Mode::Numeric),
            "exact-series" | "series" => Ok(Mode::ExactSeries),
            "trend" => Ok(Mode::Trend),
            _ => Err(Error::Parse(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DomainError,
    Pole,
    Inconclusive,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::DomainError => "DOMAIN",
            Status::Pole => "POLE",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamName {
    Q,
    K,
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamName::Q => "q",
            ParamName::K => "k",
        })
    }
}

/// Admissible values of a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The open interval `(0, 1)`.
    OpenUnit,
    /// Integers `>= 1`.
    PositiveInteger,
}

impl Domain {
    pub fn contains(self, v: &BigRat) -> bool {
        match self {
            Domain::OpenUnit => v.is_positive() && v < &BigRat::one(),
            Domain::PositiveInteger => v.is_integer() && v >= &BigRat::one(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::OpenUnit => "(0,1)",
            Domain::PositiveInteger => "integer >= 1",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: ParamName,
    pub domain: Domain,
    /// Default as `(numerator, denominator)`.
    pub default: (i64, i64),
}

impl ParamSpec {
    pub fn default_value(&self) -> BigRat {
        BigRat::new(self.default.0.into(), self.default.1.into())
    }
}

/// Parameter values. Evaluators only see resolved parameters, so the
/// accessors panic on a parameter the identity does not declare.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub q: Option<BigRat>,
    pub k: Option<BigRat>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_q(mut self, q: BigRat) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_k(mut self, k: BigRat) -> Self {
        self.k = Some(k);
        self
    }

    pub fn q(&self) -> &BigRat {
        self.q.as_ref().expect("parameter q")
    }

    pub fn k(&self) -> &BigRat {
        self.k.as_ref().expect("parameter k")
    }

    fn get(&self, name: ParamName) -> Option<&BigRat> {
        match name {
            ParamName::Q => self.q.as_ref(),
            ParamName::K => self.k.as_ref(),
        }
    }

    fn set(&mut self, name: ParamName, v: BigRat) {
        match name {
            ParamName::Q => self.q = Some(v),
            ParamName::K => self.k = Some(v),
        }
    }

    fn to_map(&self) -> BTreeMap<String, String> {
        [(ParamName::Q, &self.q), (ParamName::K, &self.k)]
            .into_iter()
            .filter_map(|(n, v)| v.as_ref().map(|v| (n.to_string(), v.to_string())))
            .collect()
    }
}

pub type SideFn = fn(&Params, &EvalContext) -> Result<Approx>;
pub type SeriesSideFn = fn(&Params, usize) -> Result<QSeries>;

/// One named secondary check attached to a numeric verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxCheck {
    pub name: String,
    pub value: String,
    pub passed: bool,
}

pub type AuxFn = fn(&Params, &EvalContext) -> Result<Vec<AuxCheck>>;

#[derive(Clone, Copy)]
pub struct NumericSides {
    pub params: &'static [ParamSpec],
    pub lhs: SideFn,
    pub rhs: SideFn,
    pub aux: Option<AuxFn>,
}

#[derive(Clone, Copy)]
pub struct SeriesSides {
    pub params: &'static [ParamSpec],
    pub lhs: SeriesSideFn,
    pub rhs: SeriesSideFn,
}

#[derive(Clone, Copy)]
pub struct TrendSpec {
    /// The scaled quantity at a given `q`.
    pub value: fn(&HPReal, &EvalContext) -> Result<HPReal>,
    pub limit: fn(&EvalContext) -> HPReal,
    pub limit_name: &'static str,
    /// Largest admissible relative error at the last `q`.
    pub rel_threshold: f64,
}

#[derive(Clone, Copy)]
pub struct IdentityDescriptor {
    pub id: &'static str,
    /// The identity in plain text.
    pub statement: &'static str,
    pub numeric: Option<NumericSides>,
    pub series: Option<SeriesSides>,
    pub trend: Option<TrendSpec>,
}

impl IdentityDescriptor {
    pub fn modes(&self) -> Vec<Mode> {
        let mut m = Vec::new();
        if self.numeric.is_some() {
            m.push(Mode::Numeric);
        }
        if self.series.is_some() {
            m.push(Mode::ExactSeries);
        }
        if self.trend.is_some() {
            m.push(Mode::Trend);
        }
        m
    }

    pub fn supports(&self, mode: Mode) -> bool {
        self.modes().contains(&mode)
    }

    /// Parameters declared for `mode`.
    pub fn params(&self, mode: Mode) -> &'static [ParamSpec] {
        match mode {
            Mode::Numeric => self.numeric.map_or(&[], |n| n.params),
            Mode::ExactSeries => self.series.map_or(&[], |s| s.params),
            Mode::Trend => &[],
        }
    }
}

impl fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDescriptor").field("id", &self.id).field("modes", &self.modes()).finish()
    }
}

/// One point of a trend check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendSample {
    pub q: String,
    pub value: String,
    pub abs_error: String,
    pub rel_error: String,
}

/// Structured outcome of one verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub mode: Mode,
    pub params: BTreeMap<String, String>,
    pub digits_or_order: u64,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub abs_diff_or_first_mismatch: Option<String>,
    pub bound: Option<String>,
    pub status: Status,
    pub detail: Option<String>,
    pub auxiliary: Vec<AuxCheck>,
    pub samples: Vec<TrendSample>,
}

impl VerificationReport {
    fn new(id: &str, mode: Mode, params: &Params, digits_or_order: u64) -> Self {
        VerificationReport {
            id: id.to_string(),
            mode,
            params: params.to_map(),
            digits_or_order,
            lhs: None,
            rhs: None,
            abs_diff_or_first_mismatch: None,
            bound: None,
            status: Status::Fail,
            detail: None,
            auxiliary: Vec::new(),
            samples: Vec::new(),
        }
    }

    fn failed_with(mut self, e: &Error) -> Self {
        self.status = status_of(e);
        self.detail = Some(e.to_string());
        self
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::Domain(_) => Status::DomainError,
        Error::Pole(_) => Status::Pole,
        Error::InsufficientDecay { .. } | Error::PrecisionBudget(_) => Status::Inconclusive,
        _ => Status::Fail,
    }
}

const Q_HALF: ParamSpec = ParamSpec { name: ParamName::Q, domain: Domain::OpenUnit, default: (1, 2) };
const K_QUARTER: ParamSpec = ParamSpec { name: ParamName::K, domain: Domain::OpenUnit, default: (1, 4) };
const K_HALF: ParamSpec = ParamSpec { name: ParamName::K, domain: Domain::OpenUnit, default: (1, 2) };
const K_INT: ParamSpec = ParamSpec { name: ParamName::K, domain: Domain::PositiveInteger, default: (1, 1) };

fn trigamma_aux(p: &Params, ctx: &EvalContext) -> Result<Vec<AuxCheck>> {
    let middle = classical::trigamma_middle(p, ctx)?;
    let closed = classical::trigamma_rhs(p, ctx)?;
    let diff = (&middle.value - &closed.value).abs();
    let limit = &(&ctx.tolerance() + &middle.bound) + &closed.bound;
    let termwise = classical::reflection_termwise(p.k(), 50, ctx);
    Ok(vec![
        AuxCheck {
            name: "middle".into(),
            value: middle.value.to_decimal_string(ctx.target_digits),
            passed: diff < limit,
        },
        AuxCheck {
            name: "termwise n<=50".into(),
            value: match termwise {
                None => "agree".into(),
                Some(n) => format!("differ at n={n}"),
            },
            passed: termwise.is_none(),
        },
    ])
}

static REGISTRY: [IdentityDescriptor; 11] = [
    IdentityDescriptor {
        id: "guillera_pi2",
        statement: "sum (1/4)^n [(1)_n/(3/2)_n]^3 (3n+2) = pi^2/4",
        numeric: Some(NumericSides { params: &[], lhs: classical::guillera_lhs, rhs: classical::guillera_rhs, aux: None }),
        series: None,
        trend: None,
    },
    IdentityDescriptor {
        id: "ramanujan_4pi",
        statement: "sum (1/4)^n [(1/2)_n/(1)_n]^3 (6n+1) = 4/pi",
        numeric: Some(NumericSides { params: &[], lhs: classical::ramanujan_lhs, rhs: classical::ramanujan_rhs, aux: None }),
        series: None,
        trend: None,
    },
    IdentityDescriptor {
        id: "hks1",
        statement: "sum q^(2n(n+1)) (1+q^(2n+2)-2q^(4n+3)) (q^2;q^2)_n^3/((q;q^2)_(n+1)^3 (-1;q)_(2n+3)) \
                    = 1/2 sum q^(2n)/(1-q^(2n+1))^2",
        numeric: Some(NumericSides { params: &[Q_HALF], lhs: qseries::hks1_lhs, rhs: qseries::hks1_rhs, aux: None }),
        series: Some(SeriesSides { params: &[], lhs: qseries::hks1_lhs_series, rhs: qseries::hks1_rhs_series }),
        trend: None,
    },
    IdentityDescriptor {
        id: "hks2",
        statement: "sum q^(n(n+1)/2) (1-q^(3n+2))/(1-q) (q;q)_n^3 (-q;q)_n/(q^3;q^2)_n^3 \
                    = (1-q)^2 (q^2;q^2)_inf^4/(q;q^2)_inf^4",
        numeric: Some(NumericSides { params: &[Q_HALF], lhs: qseries::hks2_lhs, rhs: qseries::hks2_rhs, aux: None }),
        series: Some(SeriesSides { params: &[], lhs: qseries::hks2_lhs_series, rhs: qseries::hks2_rhs_series }),
        trend: None,
    },
    IdentityDescriptor {
        id: "main_theorem",
        statement: "q sum q^(n-2k+k^2) (2q^k-q^(n+1)-q^(2n+2))/(1+q^(n+1)) \
                    (q;q)_n^4/((q;q)_(k-1)^2 (q;q)_(2n+1) (q;q)_(n-k+1)^2) \
                    = (q;q)_inf^-4 sum q^((k+n)^2) ((q;q)_inf^3-(q^(1-n-k);q)_inf^2) (q^(1+n+k);q)_inf^2",
        numeric: Some(NumericSides { params: &[Q_HALF, K_QUARTER], lhs: qseries::main_lhs, rhs: qseries::main_rhs, aux: None }),
        series: Some(SeriesSides { params: &[K_INT], lhs: qseries::main_lhs_series, rhs: qseries::main_rhs_series }),
        trend: None,
    },
    IdentityDescriptor {
        id: "partition_gf",
        statement: "1/(q;q)_inf = sum q^(n^2)/(q;q)_n^2",
        numeric: Some(NumericSides { params: &[Q_HALF], lhs: qseries::partition_lhs, rhs: qseries::partition_rhs, aux: None }),
        series: Some(SeriesSides { params: &[], lhs: qseries::partition_lhs_series, rhs: qseries::partition_rhs_series }),
        trend: None,
    },
    IdentityDescriptor {
        id: "classical_limit_trigamma",
        statement: "1/2 sum (3n+3-2k) (1)_n^4/((1)_(k-1)^2 (1)_(2n+1) (1)_(n-k+1)^2) \
                    = 1 - sum 1/((1)_(-k-n)^2 (1)_(k+n)^2) = 1 - psi'(k) sin^2(k pi)/pi^2",
        numeric: Some(NumericSides {
            params: &[K_HALF],
            lhs: classical::trigamma_lhs,
            rhs: classical::trigamma_rhs,
            aux: Some(trigamma_aux),
        }),
        series: None,
        trend: None,
    },
    IdentityDescriptor {
        id: "pi_k_half",
        statement: "sum (3n+2) (1)_n^4/((1)_(n+1/2)^2 (1)_(2n+1)) = pi",
        numeric: Some(NumericSides { params: &[], lhs: classical::pi_k_half_lhs, rhs: classical::pi_k_half_rhs, aux: None }),
        series: None,
        trend: None,
    },
    IdentityDescriptor {
        id: "zeta3_harmonic",
        statement: "sum (1/4)^n [(1)_n/(3/2)_n]^3 ((6n+4) O_(n+1) - 1) = 7 zeta(3)/2",
        numeric: Some(NumericSides {
            params: &[],
            lhs: classical::zeta3_harmonic_lhs,
            rhs: classical::zeta3_harmonic_rhs,
            aux: None,
        }),
        series: None,
        trend: None,
    },
    IdentityDescriptor {
        id: "qgamma_limit",
        statement: "(1-q) (q^2;q^2)_inf^2/(q;q^2)_inf^2 -> pi/2 as q -> 1",
        numeric: None,
        series: None,
        trend: Some(TrendSpec {
            value: qseries::qgamma_value,
            limit: qseries::half_pi,
            limit_name: "pi/2",
            rel_threshold: 0.01,
        }),
    },
    IdentityDescriptor {
        id: "hks1_scaled",
        statement: "4 (1-q)^2 sum q^(2n(n+1)) (1+q^(2n+2)-2q^(4n+3)) (q^2;q^2)_n^3/((q;q^2)_(n+1)^3 (-1;q)_(2n+3)) \
                    -> pi^2/4 as q -> 1",
        numeric: None,
        series: None,
        trend: Some(TrendSpec {
            value: qseries::hks1_scaled_value,
            limit: qseries::quarter_pi_squared,
            limit_name: "pi^2/4",
            rel_threshold: 0.01,
        }),
    },
];

pub fn registry_list() -> &'static [IdentityDescriptor] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static IdentityDescriptor> {
    REGISTRY.iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Fills defaults and checks domains. Supplying a parameter the identity
/// does not take is a usage error; an out-of-domain value is a domain
/// error.
pub fn resolve_params(specs: &[ParamSpec], given: &Params) -> Result<Params> {
    for name in [ParamName::Q, ParamName::K] {
        if given.get(name).is_some() && !specs.iter().any(|s| s.name == name) {
            return Err(Error::Usage(format!("parameter {name} is not used here")));
        }
    }
    let mut out = Params::default();
    for s in specs {
        let v = given.get(s.name).cloned().unwrap_or_else(|| s.default_value());
        if !s.domain.contains(&v) {
            return Err(Error::Domain(format!("{} = {v} outside {}", s.name, s.domain)));
        }
        out.set(s.name, v);
    }
    Ok(out)
}

fn unsupported(d: &IdentityDescriptor, mode: Mode) -> Error {
    Error::UnsupportedMode { id: d.id.to_string(), mode: mode.to_string() }
}

/// Numeric verification at `ctx.target_digits`.
///
/// Unknown identities, unsupported modes and stray parameters are errors;
/// domain violations, poles and non-convergence are reported in the
/// returned status.
pub fn verify_numeric(id: &str, params: &Params, ctx: &EvalContext) -> Result<VerificationReport> {
    let d = lookup(id)?;
    let sides = d.numeric.ok_or_else(|| unsupported(d, Mode::Numeric))?;
    let digits = ctx.target_digits;
    let p = match resolve_params(sides.params, params) {
        Ok(p) => p,
        Err(e @ Error::Domain(_)) => {
            return Ok(VerificationReport::new(id, Mode::Numeric, params, digits as u64).failed_with(&e))
        }
        Err(e) => return Err(e),
    };
    let report = VerificationReport::new(id, Mode::Numeric, &p, digits as u64);
    let (lhs, rhs) = match ((sides.lhs)(&p, ctx), (sides.rhs)(&p, ctx)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return Ok(report.failed_with(&e)),
    };
    let mut report = report;
    let diff = (&lhs.value - &rhs.value).abs();
    let bound = &lhs.bound + &rhs.bound;
    let passed = diff < &ctx.tolerance() + &bound;
    report.lhs = Some(lhs.value.to_decimal_string(digits));
    report.rhs = Some(rhs.value.to_decimal_string(digits));
    report.abs_diff_or_first_mismatch = Some(diff.to_decimal_string(3));
    report.bound = Some(bound.to_decimal_string(3));
    report.status = if passed { Status::Pass } else { Status::Fail };
    report.auxiliary.push(AuxCheck { name: "lhs terms".into(), value: lhs.terms.to_string(), passed: true });
    if let Some(aux) = sides.aux {
        match aux(&p, ctx) {
            Ok(checks) => {
                if passed && checks.iter().any(|c| !c.passed) {
                    report.status = Status::Fail;
                }
                report.auxiliary.extend(checks);
            }
            Err(e) => return Ok(report.failed_with(&e)),
        }
    }
    Ok(report)
}

/// Compact display of the first coefficients of a series.
pub fn series_preview(s: &QSeries, terms: usize) -> String {
    let shown = QSeries::from_coeffs(s.coeffs()[..=terms.min(s.order())].to_vec());
    let text = shown.to_string();
    match text.rfind(" + O(") {
        Some(pos) if terms < s.order() => format!("{} + ... + O(q^{})", &text[..pos], s.order() + 1),
        _ => text,
    }
}

/// Exact truncated-series verification through `q^order`.
pub fn verify_series(id: &str, params: &Params, order: usize) -> Result<VerificationReport> {
    let d = lookup(id)?;
    let sides = d.series.ok_or_else(|| unsupported(d, Mode::ExactSeries))?;
    if order < 1 {
        return Err(Error::Usage("order must be at least 1".into()));
    }
    let p = match resolve_params(sides.params, params) {
        Ok(p) => p,
        Err(e @ Error::Domain(_)) => {
            return Ok(VerificationReport::new(id, Mode::ExactSeries, params, order as u64).failed_with(&e))
        }
        Err(e) => return Err(e),
    };
    let mut report = VerificationReport::new(id, Mode::ExactSeries, &p, order as u64);
    let (lhs, rhs) = match ((sides.lhs)(&p, order), (sides.rhs)(&p, order)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return Ok(report.failed_with(&e)),
    };
    report.lhs = Some(series_preview(&lhs, 6));
    report.rhs = Some(series_preview(&rhs, 6));
    report.bound = Some(format!("O(q^{})", order + 1));
    match lhs.first_mismatch(&rhs) {
        None => report.status = Status::Pass,
        Some(i) => {
            report.status = Status::Fail;
            report.abs_diff_or_first_mismatch = Some(format!("q^{i}"));
            report.detail = Some(format!("coefficient of q^{i}: {} vs {}", lhs.coeff(i), rhs.coeff(i)));
        }
    }
    Ok(report)
}

/// Follows a scaled quantity along an increasing list of `q` towards its
/// limit. Passes when the absolute error strictly decreases and the last
/// relative error is below the identity's threshold; running out of
/// product or summation budget is inconclusive.
pub fn trend_check(id: &str, q_list: &[BigRat], ctx: &EvalContext) -> Result<VerificationReport> {
    let d = lookup(id)?;
    let spec = d.trend.ok_or_else(|| unsupported(d, Mode::Trend))?;
    if q_list.len() < 3 {
        return Err(Error::Usage(format!("trend needs at least 3 values of q, got {}", q_list.len())));
    }
    if q_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage("trend values of q must be strictly increasing".into()));
    }
    let mut report = VerificationReport::new(id, Mode::Trend, &Params::default(), ctx.target_digits as u64);
    report.params.insert("q".into(), q_list.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","));
    if let Some(bad) = q_list.iter().find(|q| !Domain::OpenUnit.contains(q)) {
        return Ok(report.failed_with(&Error::Domain(format!("q = {bad} outside (0,1)"))));
    }
    let limit = (spec.limit)(ctx);
    let mut errors = Vec::new();
    let mut last = None;
    for q in q_list {
        let v = match (spec.value)(&ctx.lift(q), ctx) {
            Ok(v) => v,
            Err(e) => return Ok(report.failed_with(&e)),
        };
        let err = (&v - &limit).abs();
        let rel = &err / &limit.abs();
        report.samples.push(TrendSample {
            q: q.to_string(),
            value: v.to_decimal_string(ctx.target_digits),
            abs_error: err.to_decimal_string(6),
            rel_error: rel.to_decimal_string(6),
        });
        errors.push(err);
        last = Some((v, rel));
    }
    let (v, rel) = last.expect("nonempty list");
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let below = rel.to_f64() < spec.rel_threshold;
    report.lhs = Some(v.to_decimal_string(ctx.target_digits));
    report.rhs = Some(limit.to_decimal_string(ctx.target_digits));
    report.abs_diff_or_first_mismatch = errors.last().map(|e| e.to_decimal_string(6));
    report.bound = Some(format!("relative < {}", spec.rel_threshold));
    report.detail = Some(format!("limit {}", spec.limit_name));
    report.status = if decreasing && below { Status::Pass } else { Status::Fail };
    if !decreasing {
        report.detail = Some(format!("limit {}; error not strictly decreasing", spec.limit_name));
    } else if !below {
        report.detail = Some(format!("limit {}; final relative error too large", spec.limit_name));
    }
    Ok(report)
}
