//! Front-end invariants as seeded randomized laws.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use serde_json::Value;

use qwz_cli::{combine, run, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE};

pub const CASES: u32 = 200;
const SEED: [u8; 32] = *b"qwz cli property suite, seed 000";

fn runner() -> TestRunner {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn invoke(args: &[String]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qwz".to_string()).chain(args.iter().cloned());
    let code = run(argv, &mut out, &mut err);
    (code, out, err)
}

fn verify_args() -> impl Strategy<Value = Vec<String>> {
    let ids = vec!["hks1", "hks2", "main_theorem", "partition_gf", "classical_limit_trigamma", "pi_k_half"];
    (prop::sample::select(ids), 5i64..=70, 1i64..=99, 10u32..=30, any::<bool>()).prop_map(|(id, q, k, d, json)| {
        let mut a: Vec<String> = Vec::new();
        if json {
            a.extend(["--format".into(), "json".into()]);
        }
        a.extend(["verify".into(), id.into(), "--digits".into(), d.to_string()]);
        if matches!(id, "hks1" | "hks2" | "main_theorem" | "partition_gf") {
            a.extend(["--q".into(), format!("{q}/100")]);
        }
        if matches!(id, "main_theorem" | "classical_limit_trigamma") {
            a.extend(["--k".into(), format!("0.{k:02}")]);
        }
        a
    })
}

fn any_args() -> impl Strategy<Value = Vec<String>> {
    let series = (prop::sample::select(vec!["hks1", "hks2", "partition_gf"]), 1usize..=30)
        .prop_map(|(id, n)| vec!["--format".into(), "json".into(), "series".into(), id.into(), "--order".into(), n.to_string()]);
    prop_oneof![3 => verify_args(), 1 => series]
}

pub fn determinism() -> Result<(), String> {
    runner()
        .run(&any_args(), |args| {
            let a = invoke(&args);
            let b = invoke(&args);
            prop_assert_eq!(a, b);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn exit_code_contract() -> Result<(), String> {
    let codes = prop::collection::vec(prop::sample::select(vec![EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE]), 0..12);
    runner()
        .run(&codes, |codes| {
            let c = combine(codes.clone());
            if codes.contains(&EXIT_FAIL) {
                prop_assert_eq!(c, EXIT_FAIL);
            } else if codes.iter().all(|&x| x == EXIT_PASS) {
                prop_assert_eq!(c, EXIT_PASS);
            } else {
                prop_assert!(codes.contains(&c) && c != EXIT_PASS);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const REPORT_FIELDS: [&str; 12] = [
    "id",
    "mode",
    "params",
    "digits_or_order",
    "lhs",
    "rhs",
    "abs_diff_or_first_mismatch",
    "bound",
    "status",
    "detail",
    "auxiliary",
    "samples",
];

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split('e').next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len()
}

pub fn json_round_trip() -> Result<(), String> {
    runner()
        .run(&verify_args(), |mut args| {
            if args[0] != "--format" {
                args.splice(0..0, ["--format".to_string(), "json".to_string()]);
            }
            let (code, out, err) = invoke(&args);
            prop_assert_eq!(code, EXIT_PASS, "{}", String::from_utf8_lossy(&err));
            let text = String::from_utf8(out).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
            for f in REPORT_FIELDS {
                prop_assert!(v.get(f).is_some(), "missing {}", f);
            }
            let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            prop_assert_eq!(&again, &v);
            let d = v["digits_or_order"].as_u64().unwrap() as usize;
            for side in ["lhs", "rhs"] {
                let s = v[side].as_str().unwrap();
                prop_assert!(significant_digits(s) <= d && significant_digits(s) + 2 >= d, "{} has wrong precision: {}", side, s);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Law = (&'static str, fn() -> Result<(), String>);

pub const CLI_LAWS: &[Law] = &[
    ("cli determinism", determinism),
    ("exit-code contract", exit_code_contract),
    ("json round trip", json_round_trip),
];
