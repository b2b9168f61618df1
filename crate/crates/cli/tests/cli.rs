#[path = "support/cli_laws.rs"]
mod cli_laws;

use std::process::{Command, Output};

use qwz_cli::{combine, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn qwz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwz")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const IDS: [&str; 11] = [
    "guillera_pi2",
    "ramanujan_4pi",
    "hks1",
    "hks2",
    "main_theorem",
    "partition_gf",
    "classical_limit_trigamma",
    "pi_k_half",
    "zeta3_harmonic",
    "qgamma_limit",
    "hks1_scaled",
];

const REPORT_FIELDS: [&str; 9] =
    ["id", "mode", "params", "digits_or_order", "lhs", "rhs", "abs_diff_or_first_mismatch", "bound", "status"];

#[test]
fn list_prints_registry_in_order() {
    let o = qwz(&["list"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = stdout(&o);
    let firsts: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(firsts, IDS);

    let o = qwz(&["--format", "json", "list"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), IDS.len());
}

#[test]
fn verify_json_has_every_field() {
    let o = qwz(&["--format", "json", "verify", "guillera_pi2", "--digits", "30"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for f in REPORT_FIELDS {
        assert!(v.get(f).is_some(), "missing {f}");
    }
    assert_eq!(v["status"], "pass");
    assert_eq!(v["mode"], "numeric");
    assert_eq!(v["digits_or_order"], 30);
    assert!(v["lhs"].as_str().unwrap().starts_with("2.4674011002723396547086227499"));
}

#[test]
fn decimal_and_fraction_inputs_agree() {
    let a = qwz(&["verify", "main_theorem", "--q", "0.5", "--k", "0.25", "--digits", "20"]);
    let b = qwz(&["verify", "main_theorem", "--q", "1/2", "--k", "1/4", "--digits", "20"]);
    assert_eq!(code(&a), EXIT_PASS);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "no_such_identity"],
        &["verify", "hks1", "--q", "abc"],
        &["verify", "hks1", "--q", "1/0"],
        &["verify", "main_theorem", "--q", "2"],
        &["verify", "main_theorem", "--k", "0"],
        &["verify", "guillera_pi2", "--q", "1/2"],
        &["verify", "guillera_pi2", "--digits", "3"],
        &["series", "main_theorem", "--k", "1/2"],
        &["series", "hks1", "--order", "0"],
        &["trend", "qgamma_limit", "--q", "0.9,0.8,0.99"],
        &["trend", "qgamma_limit", "--q", "0.9,0.99"],
        &["trend", "hks1_scaled", "--q", "0.9,0.99,1"],
        &["frobnicate"],
        &["--threads", "0", "list"],
    ];
    for args in cases {
        let o = qwz(args);
        assert_eq!(code(&o), EXIT_USAGE, "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn unknown_identity_lists_registry() {
    let o = qwz(&["verify", "no_such_identity"]);
    let err = stderr(&o);
    assert!(err.contains("no_such_identity"));
    for id in IDS {
        assert!(err.contains(id), "{id} not listed");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&qwz(&["--help"])), EXIT_PASS);
    assert_eq!(code(&qwz(&["--version"])), EXIT_PASS);
}

#[test]
fn series_pass_and_preview() {
    let o = qwz(&["series", "partition_gf", "--order", "30"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = stdout(&o);
    assert!(text.contains("order=30: PASS"), "{text}");
    assert!(text.contains("O(q^31)"), "{text}");
}

#[test]
fn trend_pass() {
    let o = qwz(&["--format", "json", "trend", "qgamma_limit", "--q", "0.9,0.99,0.999", "--digits", "20"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["samples"].as_array().unwrap().len(), 3);
}

#[test]
fn certify_text_and_determinism() {
    let a = qwz(&["--seed", "11", "certify"]);
    assert_eq!(code(&a), EXIT_PASS);
    let text = stdout(&a);
    assert!(text.contains("certificate: exact PASS"), "{text}");
    assert!(text.contains("qbinomial n≤40: PASS"), "{text}");
    assert!(text.contains("(seed 11)"), "{text}");
    assert!(!text.contains("FAIL"));
    let b = qwz(&["--seed", "11", "--threads", "1", "certify"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["--format", "json", "verify", "classical_limit_trigamma", "--k", "3/10", "--digits", "40"];
    assert_eq!(qwz(&args).stdout, qwz(&args).stdout);
}

#[test]
fn exit_code_precedence() {
    assert_eq!(combine([]), EXIT_PASS);
    assert_eq!(combine([EXIT_PASS, EXIT_PASS]), EXIT_PASS);
    assert_eq!(combine([EXIT_INCONCLUSIVE, EXIT_PASS]), EXIT_INCONCLUSIVE);
    assert_eq!(combine([EXIT_INCONCLUSIVE, EXIT_USAGE]), EXIT_USAGE);
    assert_eq!(combine([EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE]), EXIT_FAIL);
}

#[test]
fn in_process_run_matches_binary() {
    let mut out: Vec<u8> = Vec::new();
    let mut err: Vec<u8> = Vec::new();
    let c = qwz_cli::run(["qwz", "verify", "pi_k_half", "--digits", "25"], &mut out, &mut err);
    assert_eq!(c, EXIT_PASS);
    assert_eq!(out, qwz(&["verify", "pi_k_half", "--digits", "25"]).stdout);
}

#[test]
fn cli_laws_hold() {
    for (name, law) in cli_laws::CLI_LAWS {
        if let Err(e) = law() {
            panic!("{name}: {e}");
        }
    }
}
