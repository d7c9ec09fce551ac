//! Browser bindings for the quasi-Hermitian toolkit.
//!
//! Each exported function takes MatrixDocument JSON (the same format the
//! CLI reads) and returns a JSON string, so the page needs no typed glue.
//! Numbers use serde_json's shortest round-trip printing; the CLI is the
//! interface with the 17-digit determinism contract.

use qh2_core::tol::DEFAULT_TOL;
use qh2_core::{
    c64, constraint_data, hermitize, irreducibility, metric_for, metric_from_pair,
    validate_quasi_hermitian, Mat2, MetricParams, QuasiHermitianOp, C64,
};
use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDocument {
    matrix: [[[f64; 2]; 2]; 2],
    #[serde(default)]
    #[allow(dead_code)]
    label: Option<String>,
}

fn parse(doc: &str, which: &str) -> Result<Mat2, Value> {
    let parsed: MatrixDocument = serde_json::from_str(doc)
        .map_err(|e| json!({"error": "malformed-input", "detail": format!("{which}: {e}")}))?;
    let m = &parsed.matrix;
    for row in m {
        for entry in row {
            if !entry.iter().all(|x| x.is_finite()) {
                return Err(json!({
                    "error": "malformed-input",
                    "detail": format!("{which}: non-finite entry"),
                }));
            }
        }
    }
    Ok(Mat2::new(
        c64(m[0][0][0], m[0][0][1]),
        c64(m[0][1][0], m[0][1][1]),
        c64(m[1][0][0], m[1][0][1]),
        c64(m[1][1][0], m[1][1][1]),
    ))
}

fn validated(m: &Mat2, which: &str) -> Result<QuasiHermitianOp, Value> {
    validate_quasi_hermitian(m, DEFAULT_TOL).map_err(|r| {
        json!({"error": "not-quasi-hermitian", "detail": format!("{which}: {r}"), "reason": r.to_string()})
    })
}

fn cpx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mat_json(m: &Mat2) -> Value {
    json!([
        [cpx(m.e[0][0]), cpx(m.e[0][1])],
        [cpx(m.e[1][0]), cpx(m.e[1][1])],
    ])
}

fn render(result: Result<Value, Value>) -> String {
    let value = match result {
        Ok(v) | Err(v) => v,
    };
    serde_json::to_string(&value).expect("json values serialize")
}

/// Validation verdict plus the angle parameters when they exist.
#[wasm_bindgen]
pub fn analyze(doc: &str) -> String {
    render((|| {
        let m = parse(doc, "matrix")?;
        let op = match validate_quasi_hermitian(&m, DEFAULT_TOL) {
            Ok(op) => op,
            Err(r) => return Ok(json!({"valid": false, "reason": r.to_string()})),
        };
        let h0 = op.traceless();
        let mut out = json!({
            "valid": true,
            "q": op.q(),
            "E": op.gap(),
            "a": cpx(h0.e[0][0]),
            "b": cpx(h0.e[0][1]),
            "c": cpx(h0.e[1][0]),
        });
        match op.to_angle_form() {
            Ok(af) => {
                out["theta"] = json!({"re": af.theta().re, "im": af.theta().im});
                out["phi"] = json!({"re": af.phi().re, "im": af.phi().im});
            }
            Err(e) => {
                out["angle_refusal"] = json!(e.to_string());
            }
        }
        Ok(out)
    })())
}

/// The metric eta(k, u), its entry coefficients, and the hermitized form.
#[wasm_bindgen]
pub fn metric(doc: &str, u: f64, k: f64) -> String {
    render((|| {
        let m = parse(doc, "matrix")?;
        let op = validated(&m, "matrix")?;
        let af = op
            .to_angle_form()
            .map_err(|e| json!({"error": e.to_string(), "detail": "no angle form"}))?;
        let params = MetricParams::new(k, u).map_err(|e| {
            json!({"error": "invalid-parameter", "detail": e.to_string()})
        })?;
        let eta = metric_for(&af, &params);
        let data = constraint_data(&af, u);
        let hz = hermitize(&op.matrix(), &eta)
            .map_err(|e| json!({"error": e.to_string(), "detail": "metric not positive"}))?;
        Ok(json!({
            "eta": mat_json(&eta),
            "s": data.s,
            "lambda": cpx(data.l),
            "r": data.r,
            "case": match data.case {
                qh2_core::MetricCase::Diagonal => "diagonal",
                qh2_core::MetricCase::Coupled => "coupled",
            },
            "h": mat_json(&hz.hermitian),
        }))
    })())
}

/// Irreducibility of the pair and the recovered metric when unique.
#[wasm_bindgen]
pub fn pair_metric(doc: &str, other_doc: &str) -> String {
    render((|| {
        let m = parse(doc, "matrix")?;
        let p = parse(other_doc, "pair")?;
        let op = validated(&m, "matrix")?;
        let other = validated(&p, "pair")?;
        let rep = irreducibility(&op, &other);
        let mut out = json!({
            "delta": cpx(rep.delta),
            "irreducible": rep.irreducible,
        });
        match metric_from_pair(&op, &other, DEFAULT_TOL) {
            Ok(pm) => {
                out["u"] = json!(pm.u);
                out["eta"] = mat_json(&pm.eta);
            }
            Err(e) => {
                out["refusal"] = json!(e.to_string());
            }
        }
        Ok(out)
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = r#"{"matrix":[[[0,0],[1,0]],[[4,0],[0,0]]]}"#;

    fn value(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn analyze_reports_gap_and_angles() {
        let v = value(analyze(WORKED));
        assert_eq!(v["valid"], Value::Bool(true));
        assert!((v["E"].as_f64().unwrap() - 2.0).abs() <= 1e-12);
        assert!((v["theta"]["re"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() <= 1e-12);
        assert!((v["phi"]["im"].as_f64().unwrap() + 2.0f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn analyze_rejects_with_reason() {
        let v = value(analyze(r#"{"matrix":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#));
        assert_eq!(v["valid"], Value::Bool(false));
        assert_eq!(v["reason"], "non-diagonalizable");
    }

    #[test]
    fn metric_matches_the_worked_entries() {
        let v = value(metric(WORKED, 2.0, 1.0));
        assert!((v["eta"][0][0][0].as_f64().unwrap() - 1.5).abs() <= 1e-12);
        assert!((v["eta"][1][1][0].as_f64().unwrap() - 0.375).abs() <= 1e-12);
        let h = value(metric(WORKED, 1.0, 1.0));
        assert!((h["h"][0][1][0].as_f64().unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn pair_metric_recovers_u() {
        let v = value(pair_metric(
            WORKED,
            r#"{"matrix":[[[0,1],[4,1.5]],[[16,-6],[0,-1]]]}"#,
        ));
        assert_eq!(v["irreducible"], Value::Bool(true));
        assert!((v["u"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn malformed_input_reports_an_error() {
        let v = value(analyze("{broken"));
        assert_eq!(v["error"], "malformed-input");
        let v = value(metric(WORKED, -1.0, 1.0));
        assert_eq!(v["error"], "invalid-parameter");
    }
}
