//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string,
//! either the payload or `{"error": "..."}`.

use qwz_core::exact::parse_rational;
use qwz_core::identities::{verify_numeric, Params, VerificationReport};
use qwz_core::numerics::EvalContext;
use qwz_core::wz::WzPair;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_DIGITS: u32 = 200;

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&ErrorBody { error }),
    }
    .expect("serializable")
}

fn context(digits: u32) -> Result<EvalContext, String> {
    if !(5..=MAX_DIGITS).contains(&digits) {
        return Err(format!("digits must be in 5..={MAX_DIGITS}, got {digits}"));
    }
    Ok(EvalContext::new(digits))
}

fn rational(name: &str, text: &str) -> Result<qwz_core::exact::BigRat, String> {
    parse_rational(text.trim()).map_err(|e| format!("{name}: {e}"))
}

/// Numeric check of the free-parameter identity at `(q, k)`.
#[wasm_bindgen]
pub fn verify_main_theorem(q: &str, k: &str, digits: u32) -> String {
    to_json((|| -> Result<VerificationReport, String> {
        let ctx = context(digits)?;
        let params = Params::new().with_q(rational("q", q)?).with_k(rational("k", k)?);
        verify_numeric("main_theorem", &params, &ctx).map_err(|e| e.to_string())
    })())
}

#[derive(Serialize)]
struct CurvePoint {
    k: String,
    lhs: Option<String>,
    rhs: Option<String>,
    abs_diff: Option<String>,
    status: String,
}

/// Both sides of the trigamma identity at `k = j/steps`, `0 < j < steps`.
#[wasm_bindgen]
pub fn trigamma_curve(steps: u32, digits: u32) -> String {
    to_json((|| -> Result<Vec<CurvePoint>, String> {
        if !(2..=100).contains(&steps) {
            return Err(format!("steps must be in 2..=100, got {steps}"));
        }
        let ctx = context(digits)?;
        (1..steps)
            .map(|j| {
                let k = qwz_core::exact::rat(j as i64, steps as i64);
                let r = verify_numeric("classical_limit_trigamma", &Params::new().with_k(k.clone()), &ctx)
                    .map_err(|e| e.to_string())?;
                Ok(CurvePoint {
                    k: k.to_string(),
                    lhs: r.lhs,
                    rhs: r.rhs,
                    abs_diff: r.abs_diff_or_first_mismatch,
                    status: r.status.to_string(),
                })
            })
            .collect()
    })())
}

#[derive(Serialize)]
struct CertificateResult {
    passed: bool,
    witness: Option<String>,
    random_points_passed: bool,
    seed: u64,
}

/// Exact check of the certificate identity, plus a spot check at random
/// rational points.
#[wasm_bindgen]
pub fn certify(seed: u32) -> String {
    let pair = WzPair::new();
    let exact = pair.certificate_identity_check();
    let spot = pair.random_point_check(seed as u64, 25);
    to_json::<CertificateResult>(Ok(CertificateResult {
        passed: exact.passed,
        witness: exact.witness.or(spot.witness),
        random_points_passed: spot.passed,
        seed: seed as u64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn main_theorem_passes() {
        let v: Value = serde_json::from_str(&verify_main_theorem("1/2", "0.25", 20)).unwrap();
        assert_eq!(v["status"], "pass");
    }

    #[test]
    fn bad_input_is_an_error_object() {
        let v: Value = serde_json::from_str(&verify_main_theorem("abc", "1/4", 20)).unwrap();
        assert!(v["error"].as_str().unwrap().starts_with("q:"));
        let v: Value = serde_json::from_str(&verify_main_theorem("1/2", "1/4", 1)).unwrap();
        assert!(v["error"].is_string());
        let v: Value = serde_json::from_str(&trigamma_curve(1, 20)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn out_of_domain_q_reports_status() {
        let v: Value = serde_json::from_str(&verify_main_theorem("3/2", "1/4", 20)).unwrap();
        assert!(v.get("error").is_some() || v["status"] == "domain-error");
    }

    #[test]
    fn curve_has_interior_points() {
        let v: Value = serde_json::from_str(&trigamma_curve(4, 15)).unwrap();
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p["status"] == "PASS"));
        assert_eq!(pts[1]["k"], "1/2");
    }

    #[test]
    fn certificate_passes() {
        let v: Value = serde_json::from_str(&certify(7)).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["random_points_passed"], true);
    }
}
