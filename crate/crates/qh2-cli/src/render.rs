//! Deterministic JSON rendering.
//!
//! Every floating-point number is emitted with 17 significant digits so a
//! reader parsing the output recovers the exact bit pattern. The formatted
//! token is injected through `RawValue`, keeping serde_json from
//! re-rendering it.

use qh2_core::{C64, Mat2};
use serde::Serialize;
use serde_json::value::RawValue;

/// A pre-formatted JSON number token.
pub type Num = Box<RawValue>;

/// Complex number as a [re, im] pair.
pub type Cpx = [Num; 2];

/// 2x2 matrix as rows of [re, im] pairs.
pub type MatJson = [[Cpx; 2]; 2];

pub fn num(x: f64) -> Num {
    let x = x + 0.0; // canonicalize -0.0
    RawValue::from_string(format!("{x:.16e}")).expect("a finite float formats as a JSON number")
}

pub fn cpx(z: C64) -> Cpx {
    [num(z.re), num(z.im)]
}

pub fn mat(m: &Mat2) -> MatJson {
    [
        [cpx(m.e[0][0]), cpx(m.e[0][1])],
        [cpx(m.e[1][0]), cpx(m.e[1][1])],
    ]
}

/// An angle with explicit named parts, as documented in the schemas.
#[derive(Serialize)]
pub struct AngleJson {
    pub re: Num,
    pub im: Num,
}

pub fn angle(z: C64) -> AngleJson {
    AngleJson {
        re: num(z.re),
        im: num(z.im),
    }
}

#[derive(Serialize)]
pub struct ValidOut {
    pub valid: bool,
    pub q: Num,
    pub a: Cpx,
    pub b: Cpx,
    pub c: Cpx,
    #[serde(rename = "E")]
    pub e: Num,
}

#[derive(Serialize)]
pub struct InvalidOut {
    pub valid: bool,
    pub reason: String,
}

#[derive(Serialize)]
pub struct AngleOut {
    pub q: Num,
    #[serde(rename = "E")]
    pub e: Num,
    pub theta: AngleJson,
    pub phi: AngleJson,
}

#[derive(Serialize)]
pub struct MetricOut {
    pub k: Num,
    pub u: Num,
    pub eta: MatJson,
    pub s: Num,
    pub lambda: Cpx,
    pub r: Num,
    pub rs_minus_lambda_sq: Num,
}

#[derive(Serialize)]
pub struct ObservableEntry {
    pub matrix: MatJson,
    pub case: &'static str,
    pub irreducible: bool,
}

#[derive(Serialize)]
pub struct ObservablesOut {
    pub u: Num,
    pub seed: u64,
    pub count: usize,
    pub observables: Vec<ObservableEntry>,
}

#[derive(Serialize)]
pub struct PairMetricOut {
    pub u: Num,
    pub w: Option<Num>,
    pub chart: &'static str,
    pub eta: MatJson,
}

#[derive(Serialize)]
pub struct IrreducibleOut {
    pub delta: Cpx,
    pub commutator_det: Cpx,
    pub scale: Num,
    pub irreducible: bool,
}

#[derive(Serialize)]
pub struct HermitizeOut {
    pub eta: MatJson,
    pub rho: MatJson,
    pub h: MatJson,
}

#[derive(Serialize)]
pub struct VerifyOut {
    pub operators: usize,
    pub kernel_dim: usize,
    pub expected_dim: Option<usize>,
    pub family_deviation: Option<Num>,
    pub recovered_u: Option<Num>,
    pub ray_deviation: Option<Num>,
    pub pass: bool,
}

/// Shape shared by exit-1 refusals and exit-2 input errors.
#[derive(Serialize)]
pub struct ErrorOut {
    pub error: String,
    pub detail: String,
}
