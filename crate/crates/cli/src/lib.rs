//! Front end for the `qwz` binary.
//!
//! Exit codes: 0 when every check passes, 1 when at least one fails, 2 for
//! usage and domain errors, 3 when a check is inconclusive.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qwz_core::exact::{parse_rational, BigRat};
use qwz_core::identities::{
    registry_list, trend_check, verify_numeric, verify_series, Params, Status, VerificationReport,
};
use qwz_core::numerics::EvalContext;
use qwz_core::wz::{self, CheckMode, CheckOutcome, TelescopeMode, WzPair};
use qwz_core::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qwz", version, about = "Verify q-series identities exactly and to high precision")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the registered identities.
    List,
    /// Numeric verification of one identity.
    Verify {
        id: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Exact truncated power-series verification.
    Series {
        id: String,
        #[arg(long)]
        k: Option<String>,
        #[arg(long, default_value_t = 100)]
        order: usize,
    },
    /// Exact certificate check, q-binomial sweep, telescoping samples.
    Certify,
    /// Follow a scaled quantity as q approaches 1.
    Trend {
        id: String,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<String>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Run the full suite.
    All {
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long, default_value_t = 100)]
        order: usize,
    },
}

/// One line of `certify` output.
#[derive(Clone, Debug, Serialize)]
pub struct CertLine {
    pub check: String,
    pub passed: bool,
    pub mode: Option<CheckMode>,
    pub witness: Option<String>,
}

impl CertLine {
    fn from_outcome(check: String, r: std::result::Result<CheckOutcome, Error>) -> Self {
        match r {
            Ok(o) => CertLine { check, passed: o.passed, mode: Some(o.mode), witness: o.witness },
            Err(e) => CertLine { check, passed: false, mode: None, witness: Some(e.to_string()) },
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    domain_or_pole: usize,
    inconclusive: usize,
    exit_code: i32,
}

#[derive(Debug, Serialize)]
struct SuiteOutput<'a> {
    reports: &'a [VerificationReport],
    certificate: &'a [CertLine],
    summary: Summary,
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::DomainError | Status::Pole => EXIT_USAGE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Overall exit code of several checks: any failure dominates, then
/// usage/domain problems, then inconclusive.
pub fn combine(codes: impl IntoIterator<Item = i32>) -> i32 {
    let codes: Vec<i32> = codes.into_iter().collect();
    [EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE].into_iter().find(|c| codes.contains(c)).unwrap_or(EXIT_PASS)
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InsufficientDecay { .. } | Error::PrecisionBudget(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    }
}

fn parse_param(name: &str, v: &Option<String>) -> Result<Option<BigRat>, Error> {
    v.as_deref()
        .map(|s| parse_rational(s).map_err(|e| Error::Usage(format!("--{name}: {e}"))))
        .transpose()
}

fn check_digits(d: u32) -> Result<EvalContext, Error> {
    if d < 5 {
        return Err(Error::Usage(format!("--digits must be at least 5, got {d}")));
    }
    Ok(EvalContext::new(d))
}

fn check_order(n: usize) -> Result<usize, Error> {
    if n < 1 {
        return Err(Error::Usage("--order must be at least 1".into()));
    }
    Ok(n)
}

fn write_registry(out: &mut dyn Write) -> std::io::Result<()> {
    for d in registry_list() {
        let modes: Vec<String> = d.modes().iter().map(|m| m.to_string()).collect();
        writeln!(out, "{:<26} {:<22} {}", d.id, modes.join(","), d.statement)?;
    }
    Ok(())
}

fn write_report_text(out: &mut dyn Write, r: &VerificationReport) -> std::io::Result<()> {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let scale = if r.mode == qwz_core::identities::Mode::ExactSeries { "order" } else { "D" };
    writeln!(out, "{} [{}] {} {}={}: {}", r.id, r.mode, params.join(" "), scale, r.digits_or_order, r.status)?;
    if let Some(l) = &r.lhs {
        writeln!(out, "  lhs   {l}")?;
    }
    if let Some(v) = &r.rhs {
        writeln!(out, "  rhs   {v}")?;
    }
    if let Some(d) = &r.abs_diff_or_first_mismatch {
        let label = if r.mode == qwz_core::identities::Mode::ExactSeries { "first mismatch" } else { "|diff|" };
        writeln!(out, "  {label} {d}")?;
    }
    if let Some(b) = &r.bound {
        writeln!(out, "  bound {b}")?;
    }
    for a in &r.auxiliary {
        writeln!(out, "  {}: {}{}", a.name, a.value, if a.passed { "" } else { " (FAIL)" })?;
    }
    for s in &r.samples {
        writeln!(out, "  q={:<8} value {}  rel.err {}", s.q, s.value, s.rel_error)?;
    }
    if let Some(d) = &r.detail {
        writeln!(out, "  {d}")?;
    }
    Ok(())
}

fn emit_reports(out: &mut dyn Write, format: Format, reports: &[VerificationReport]) -> std::io::Result<()> {
    match format {
        Format::Json if reports.len() == 1 => writeln!(out, "{}", to_json(&reports[0])),
        Format::Json => writeln!(out, "{}", to_json(&reports)),
        Format::Text => reports.iter().try_for_each(|r| write_report_text(out, r)),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

/// The checks behind `certify`, in a fixed order.
pub fn certificate_suite(seed: u64) -> Vec<CertLine> {
    let pair = WzPair::new();
    let mut lines = vec![
        CertLine::from_outcome("certificate".into(), Ok(pair.certificate_identity_check())),
        CertLine::from_outcome(
            format!("certificate at 100 random points (seed {seed})"),
            Ok(pair.random_point_check(seed, 100)),
        ),
    ];
    let sweep: Vec<CheckOutcome> = (0..=40u32).into_par_iter().map(wz::qbinomial_sum_check).collect();
    let witness = sweep.iter().find(|o| !o.passed).and_then(|o| o.witness.clone());
    lines.push(CertLine {
        check: "qbinomial n≤40".into(),
        passed: witness.is_none(),
        mode: Some(CheckMode::ExactRatfunc),
        witness,
    });
    let exact: Vec<CertLine> = [1i64, 2]
        .into_par_iter()
        .flat_map_iter(|k| (0..=5u64).map(move |m| (k, m)))
        .map(|(k, m)| {
            CertLine::from_outcome(
                format!("telescoping k={k} m={m}"),
                wz::telescoping_check(m, &BigRat::from_integer(k.into()), &TelescopeMode::ExactSeries { order: 60 }),
            )
        })
        .collect();
    lines.extend(exact);
    let ctx = EvalContext::new(25);
    let q = ctx.lift(&BigRat::new(2.into(), 5.into()));
    lines.push(CertLine::from_outcome(
        "telescoping k=7/10 m=10 q=2/5".into(),
        wz::telescoping_check(10, &BigRat::new(7.into(), 10.into()), &TelescopeMode::Numeric { q, ctx }),
    ));
    let half = ctx.lift(&BigRat::new(1.into(), 2.into()));
    for k in [BigRat::new(3.into(), 10.into()), BigRat::from_integer(1.into())] {
        lines.push(CertLine::from_outcome(format!("H(k) k={k} q=1/2"), wz::h_identity_check(&k, &half, &ctx)));
    }
    lines
}

fn write_cert_text(out: &mut dyn Write, lines: &[CertLine]) -> std::io::Result<()> {
    for l in lines {
        let word = if l.passed { "PASS" } else { "FAIL" };
        let qualifier = if l.check == "certificate" { "exact " } else { "" };
        writeln!(out, "{}: {qualifier}{word}", l.check)?;
        if let Some(w) = &l.witness {
            writeln!(out, "  witness: {w}")?;
        }
    }
    Ok(())
}

enum Job {
    Numeric(&'static str, Params, u32),
    Series(&'static str, Params, usize),
    Trend(&'static str, Vec<BigRat>, u32),
}

fn suite_jobs(digits: u32, order: usize) -> Vec<Job> {
    let r = |p: i64, q: i64| BigRat::new(p.into(), q.into());
    let mut jobs = vec![Job::Numeric("guillera_pi2", Params::new(), digits), Job::Numeric("ramanujan_4pi", Params::new(), digits)];
    for id in ["hks1", "hks2"] {
        for q in [r(3, 10), r(1, 2), r(7, 10)] {
            jobs.push(Job::Numeric(id, Params::new().with_q(q), digits));
        }
        jobs.push(Job::Series(id, Params::new(), order));
    }
    for q in [r(1, 5), r(1, 2), r(4, 5)] {
        for k in [r(1, 4), r(1, 2), r(3, 4)] {
            jobs.push(Job::Numeric("main_theorem", Params::new().with_q(q.clone()).with_k(k), digits));
        }
    }
    for k in 1..=3 {
        jobs.push(Job::Series("main_theorem", Params::new().with_k(r(k, 1)), order));
    }
    jobs.push(Job::Numeric("partition_gf", Params::new(), digits));
    jobs.push(Job::Series("partition_gf", Params::new(), order.max(200)));
    for k in [1, 3, 5, 7, 9] {
        jobs.push(Job::Numeric("classical_limit_trigamma", Params::new().with_k(r(k, 10)), digits));
    }
    jobs.push(Job::Numeric("pi_k_half", Params::new(), digits));
    jobs.push(Job::Numeric("zeta3_harmonic", Params::new(), digits));
    let qs = vec![r(9, 10), r(99, 100), r(999, 1000)];
    jobs.push(Job::Trend("qgamma_limit", qs.clone(), digits.min(20)));
    jobs.push(Job::Trend("hks1_scaled", qs, digits.min(20)));
    jobs
}

fn run_job(job: &Job) -> Result<VerificationReport, Error> {
    match job {
        Job::Numeric(id, p, d) => verify_numeric(id, p, &EvalContext::new(*d)),
        Job::Series(id, p, n) => verify_series(id, p, *n),
        Job::Trend(id, qs, d) => trend_check(id, qs, &EvalContext::new(*d)),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::Usage(format!("write failed: {e}"));
    match cli.command {
        Command::List => {
            match cli.format {
                Format::Text => write_registry(out).map_err(io)?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry {
                        id: &'static str,
                        modes: Vec<qwz_core::identities::Mode>,
                        statement: &'static str,
                    }
                    let entries: Vec<Entry> = registry_list()
                        .iter()
                        .map(|d| Entry { id: d.id, modes: d.modes(), statement: d.statement })
                        .collect();
                    writeln!(out, "{}", to_json(&entries)).map_err(io)?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Verify { id, q, k, digits } => {
            let ctx = check_digits(digits)?;
            let params = Params { q: parse_param("q", &q)?, k: parse_param("k", &k)? };
            let report = verify_numeric(&id, &params, &ctx)?;
            emit_reports(out, cli.format, std::slice::from_ref(&report)).map_err(io)?;
            Ok(status_code(report.status))
        }
        Command::Series { id, k, order } => {
            let order = check_order(order)?;
            let params = Params { q: None, k: parse_param("k", &k)? };
            let report = verify_series(&id, &params, order)?;
            emit_reports(out, cli.format, std::slice::from_ref(&report)).map_err(io)?;
            Ok(status_code(report.status))
        }
        Command::Trend { id, q, digits } => {
            let ctx = check_digits(digits)?;
            let qs = q.iter().map(|s| parse_param("q", &Some(s.clone())).map(Option::unwrap)).collect::<Result<Vec<_>, _>>()?;
            let report = trend_check(&id, &qs, &ctx)?;
            emit_reports(out, cli.format, std::slice::from_ref(&report)).map_err(io)?;
            Ok(status_code(report.status))
        }
        Command::Certify => {
            let lines = certificate_suite(cli.seed);
            match cli.format {
                Format::Text => write_cert_text(out, &lines).map_err(io)?,
                Format::Json => writeln!(out, "{}", to_json(&lines)).map_err(io)?,
            }
            Ok(if lines.iter().all(|l| l.passed) { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::All { digits, order } => {
            check_digits(digits)?;
            let order = check_order(order)?;
            let jobs = suite_jobs(digits, order);
            let results: Vec<Result<VerificationReport, Error>> = jobs.par_iter().map(run_job).collect();
            let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            let cert = certificate_suite(cli.seed);
            let codes = reports
                .iter()
                .map(|r| status_code(r.status))
                .chain(cert.iter().map(|l| if l.passed { EXIT_PASS } else { EXIT_FAIL }));
            let code = combine(codes);
            let count = |s: &[Status]| reports.iter().filter(|r| s.contains(&r.status)).count();
            let cert_failed = cert.iter().filter(|l| !l.passed).count();
            let summary = Summary {
                total: reports.len() + cert.len(),
                passed: count(&[Status::Pass]) + cert.len() - cert_failed,
                failed: count(&[Status::Fail]) + cert_failed,
                domain_or_pole: count(&[Status::DomainError, Status::Pole]),
                inconclusive: count(&[Status::Inconclusive]),
                exit_code: code,
            };
            match cli.format {
                Format::Json => {
                    let s = SuiteOutput { reports: &reports, certificate: &cert, summary };
                    writeln!(out, "{}", to_json(&s)).map_err(io)?;
                }
                Format::Text => {
                    reports.iter().try_for_each(|r| write_report_text(out, r)).map_err(io)?;
                    write_cert_text(out, &cert).map_err(io)?;
                    writeln!(
                        out,
                        "summary: {} checks, {} passed, {} failed, {} domain/pole, {} inconclusive",
                        summary.total, summary.passed, summary.failed, summary.domain_or_pole, summary.inconclusive
                    )
                    .map_err(io)?;
                }
            }
            Ok(code)
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let threads = cli.threads;
    let work = move |out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)| match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::UnknownIdentity(_)) {
                let _ = writeln!(err, "known identities:");
                let _ = write_registry(err);
            }
            error_code(&e)
        }
    };
    match threads {
        Some(0) => {
            let _ = writeln!(err, "error: --threads must be at least 1");
            EXIT_USAGE
        }
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| work(out, err)),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        None => work(out, err),
    }
}
