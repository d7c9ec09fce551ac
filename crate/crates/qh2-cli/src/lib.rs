//! JSON-in / JSON-out command line for quasi-Hermitian 2x2 operators.
//!
//! Every invocation writes exactly one JSON object to standard output and
//! uses the exit code as the verdict channel: 0 for success or a true
//! verdict, 1 for a false verdict or a refusal (with an {"error", "detail"}
//! object), 2 for malformed input. Standard error carries human-readable
//! diagnostics only. Identical arguments and files produce byte-identical
//! output; all samplers take explicit seeds.

mod input;
mod render;

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use qh2_core::oracle::{intertwiner_space, intertwining_residual, pd_representative, span_deviation};
use qh2_core::tol::{DEFAULT_TOL, ORACLE_TOL};
use qh2_core::{
    c64, constraint_data, dual_basis_family, hermitize, irreducibility, irreducibility_raw,
    metric_for, metric_from_pair, sample_compatible, validate_quasi_hermitian, AngleForm,
    AngleFormError, FamilyChart, Mat2, MetricCase, MetricFamily, MetricParams, QuasiHermitianOp,
};

use input::load_matrix;
use render::{
    angle, cpx, mat, num, AngleOut, ErrorOut, HermitizeOut, InvalidOut, IrreducibleOut, MetricOut,
    ObservableEntry, ObservablesOut, PairMetricOut, ValidOut, VerifyOut,
};

const ABOUT: &str = "Quasi-Hermitian 2x2 operators: validation, angle form, metric \
families, compatible observables, pair-metric recovery, and hermitization.";

const AFTER_HELP: &str = "\
Matrix arguments accept a MatrixDocument either inline (the value starts
with '{') or as a file path. The document is a JSON object
  {\"matrix\": [[[re,im],[re,im]],[[re,im],[re,im]]], \"label\": \"optional\"}
with exactly 2x2 entries, each a finite [re, im] pair.

Exit codes: 0 success or true verdict; 1 false verdict or refusal, with an
{\"error\", \"detail\"} object on standard output; 2 malformed input.

The env var QH2_TOL (positive real, default 1e-9) overrides the acceptance
tolerance used by validation and recovery checks.";

const ANGLE_HELP: &str = "\
Branch conventions: theta and phi are principal determinations with
Re theta in [0, pi] and Re phi in [0, 2 pi); on the boundary lines
Re theta = 0 or pi the sign is fixed by Im theta >= 0. Diagonal operators
report theta = 0 or pi and phi = 0 exactly. Operators with exactly one
vanishing off-diagonal entry are outside the chart and are refused with
triangular-unrepresentable.";

#[derive(Parser)]
#[command(name = "qh2", version, about = ABOUT, after_long_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct MatrixArg {
    /// Operator as a MatrixDocument: inline JSON or a file path.
    #[arg(short = 'm', long = "matrix", value_name = "DOC")]
    matrix: String,
}

#[derive(Args)]
struct PairArg {
    /// Second operator, same format as --matrix.
    #[arg(short = 'p', long = "pair", value_name = "DOC")]
    pair: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check quasi-Hermiticity; report the trace/traceless split and E.
    Validate(MatrixArg),
    /// Report the canonical angle parameters (E, theta, phi).
    #[command(after_long_help = ANGLE_HELP)]
    Angle(MatrixArg),
    /// Build the metric eta(k, u) and report its entry coefficients.
    Metric {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Family parameter, u > 0.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        u: f64,
        /// Overall scale, k > 0.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        k: f64,
    },
    /// Sample observables compatible with the metric eta(k, u).
    Observables {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Family parameter, u > 0.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        u: f64,
        /// Sampler seed; fixed seed means byte-identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of observables to draw.
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Recover the unique metric (k = 1) determined by an irreducible pair.
    PairMetric {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        pair: PairArg,
    },
    /// Test whether a pair shares an eigenvector; exit 1 when it does.
    Irreducible {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        pair: PairArg,
    },
    /// Conjugate the operator into Hermitian form with a chosen metric.
    Hermitize {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Family parameter of the metric eta(1, u).
        #[arg(long, conflicts_with = "eta", allow_negative_numbers = true)]
        u: Option<f64>,
        /// Explicit metric as a MatrixDocument instead of a family member.
        #[arg(long, value_name = "DOC")]
        eta: Option<String>,
    },
    /// Cross-validate closed forms against the brute-force kernel solver.
    Verify {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Optional second operator; switches to the pair report.
        #[arg(short = 'p', long = "pair", value_name = "DOC")]
        pair: Option<String>,
    },
}

/// A rendered response: the JSON line and the process exit code.
type Response = (String, i32);

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize infallibly")
}

fn ok<T: serde::Serialize>(value: &T) -> Response {
    (json(value), 0)
}

fn refusal(code: &str, detail: String) -> Response {
    eprintln!("qh2: {detail}");
    (
        json(&ErrorOut {
            error: code.to_string(),
            detail,
        }),
        1,
    )
}

fn malformed(code: &str, detail: String) -> Response {
    eprintln!("qh2: {detail}");
    (
        json(&ErrorOut {
            error: code.to_string(),
            detail,
        }),
        2,
    )
}

fn tolerance() -> Result<f64, Response> {
    match std::env::var("QH2_TOL") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TOL),
        Err(e) => Err(malformed("invalid-tolerance", format!("QH2_TOL: {e}"))),
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| {
                malformed(
                    "invalid-tolerance",
                    format!("QH2_TOL must be a positive finite real, got {raw:?}"),
                )
            }),
    }
}

fn matrix_of(arg: &str, which: &str) -> Result<Mat2, Response> {
    load_matrix(arg)
        .map(|(m, _)| m)
        .map_err(|e| malformed("malformed-input", format!("{which}: {}", e.detail)))
}

fn validated(mat: &Mat2, which: &str, tol: f64) -> Result<QuasiHermitianOp, Response> {
    validate_quasi_hermitian(mat, tol)
        .map_err(|r| refusal("not-quasi-hermitian", format!("{which}: {r}")))
}

fn angle_form(op: &QuasiHermitianOp) -> Result<AngleForm, Response> {
    op.to_angle_form().map_err(|e| {
        let detail = match e {
            AngleFormError::Scalar => "the traceless part vanishes; no angle form exists",
            AngleFormError::Triangular => {
                "exactly one off-diagonal entry is zero; the angle family does not reach \
                 triangular operators"
            }
            AngleFormError::Underflow => {
                "the off-diagonal product underflows; angle extraction is unreliable"
            }
        };
        refusal(&e.to_string(), detail.to_string())
    })
}

fn family_params(k: f64, u: f64) -> Result<MetricParams, Response> {
    MetricParams::new(k, u).map_err(|_| {
        malformed(
            "invalid-parameter",
            format!("metric parameters must be finite and positive, got k = {k}, u = {u}"),
        )
    })
}

fn chart_label(chart: &FamilyChart) -> &'static str {
    match chart {
        FamilyChart::Angle(_) => "angle",
        FamilyChart::DualBasis => "dual-basis",
    }
}

fn cmd_validate(m: &Mat2, tol: f64) -> Response {
    match validate_quasi_hermitian(m, tol) {
        Ok(op) => {
            let h0 = op.traceless();
            ok(&ValidOut {
                valid: true,
                q: num(op.q()),
                a: cpx(h0.e[0][0]),
                b: cpx(h0.e[0][1]),
                c: cpx(h0.e[1][0]),
                e: num(op.gap()),
            })
        }
        Err(reason) => {
            eprintln!("qh2: not quasi-Hermitian: {reason}");
            (
                json(&InvalidOut {
                    valid: false,
                    reason: reason.to_string(),
                }),
                1,
            )
        }
    }
}

fn cmd_angle(m: &Mat2, tol: f64) -> Response {
    let op = match validated(m, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    match angle_form(&op) {
        Ok(af) => ok(&AngleOut {
            q: num(af.q()),
            e: num(af.gap()),
            theta: angle(af.theta()),
            phi: angle(af.phi()),
        }),
        Err(r) => r,
    }
}

fn cmd_metric(m: &Mat2, u: f64, k: f64, tol: f64) -> Response {
    let op = match validated(m, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let af = match angle_form(&op) {
        Ok(af) => af,
        Err(r) => return r,
    };
    let params = match family_params(k, u) {
        Ok(p) => p,
        Err(r) => return r,
    };
    let data = constraint_data(&af, u);
    let eta = metric_for(&af, &params);
    ok(&MetricOut {
        k: num(k),
        u: num(u),
        eta: mat(&eta),
        s: num(data.s),
        lambda: cpx(data.l),
        r: num(data.r),
        rs_minus_lambda_sq: num(data.r * data.s - data.l.norm_sqr()),
    })
}

fn cmd_observables(matrix: &Mat2, u: f64, seed: u64, count: usize, tol: f64) -> Response {
    let op = match validated(matrix, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let af = match angle_form(&op) {
        Ok(af) => af,
        Err(r) => return r,
    };
    if let Err(r) = family_params(1.0, u) {
        return r;
    }
    let case = match constraint_data(&af, u).case {
        MetricCase::Diagonal => "diagonal",
        MetricCase::Coupled => "coupled",
    };
    let reference = op.matrix();
    let observables = sample_compatible(&af, u, seed, count)
        .iter()
        .map(|sample| ObservableEntry {
            matrix: mat(sample),
            case,
            irreducible: irreducibility_raw(&reference, sample).irreducible,
        })
        .collect();
    ok(&ObservablesOut {
        u: num(u),
        seed,
        count,
        observables,
    })
}

fn cmd_pair_metric(matrix: &Mat2, pair: &Mat2, tol: f64) -> Response {
    let op = match validated(matrix, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let other = match validated(pair, "pair", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    match metric_from_pair(&op, &other, tol) {
        Ok(pm) => ok(&PairMetricOut {
            u: num(pm.u),
            w: pm.w.map(num),
            chart: chart_label(&pm.chart),
            eta: mat(&pm.eta),
        }),
        Err(e) => {
            let detail = match e {
                qh2_core::PairMetricError::DegeneratePair => {
                    "the pair shares an eigenvector; the metric is not unique up to scale"
                }
                qh2_core::PairMetricError::NoCompatibleMetric => {
                    "the pair is irreducible but no positive family parameter fits"
                }
            };
            refusal(&e.to_string(), detail.to_string())
        }
    }
}

fn cmd_irreducible(matrix: &Mat2, pair: &Mat2, tol: f64) -> Response {
    let op = match validated(matrix, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let other = match validated(pair, "pair", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let report = irreducibility(&op, &other);
    let line = json(&IrreducibleOut {
        delta: cpx(report.delta),
        commutator_det: cpx(report.commutator_det),
        scale: num(report.scale),
        irreducible: report.irreducible,
    });
    (line, if report.irreducible { 0 } else { 1 })
}

fn cmd_hermitize(matrix: &Mat2, u: Option<f64>, eta_arg: Option<&str>, tol: f64) -> Response {
    let op = match validated(matrix, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let eta = match eta_arg {
        Some(doc) => match matrix_of(doc, "eta") {
            Ok(m) => m,
            Err(r) => return r,
        },
        None => {
            let af = match angle_form(&op) {
                Ok(af) => af,
                Err(r) => return r,
            };
            let params = match family_params(1.0, u.unwrap_or(1.0)) {
                Ok(p) => p,
                Err(r) => return r,
            };
            metric_for(&af, &params)
        }
    };
    let hz = match hermitize(&op.matrix(), &eta) {
        Ok(hz) => hz,
        Err(e) => {
            return refusal(
                &e.to_string(),
                "the metric must be Hermitian positive definite".to_string(),
            )
        }
    };
    let rho = match hz.transform.inverse() {
        Some(r) => r,
        None => {
            return refusal(
                "metric-not-positive",
                "the metric square root is singular".to_string(),
            )
        }
    };
    ok(&HermitizeOut {
        eta: mat(&eta),
        rho: mat(&rho),
        h: mat(&hz.hermitian),
    })
}

/// Family generators for a non-scalar operator: angle chart when it exists,
/// dual eigenbasis otherwise.
fn family_of(op: &QuasiHermitianOp) -> Option<MetricFamily> {
    match op.to_angle_form() {
        Ok(af) => Some(qh2_core::metric_family(&af)),
        Err(AngleFormError::Scalar) => None,
        Err(_) => dual_basis_family(op),
    }
}

fn cmd_verify(matrix: &Mat2, pair: Option<&Mat2>, tol: f64) -> Response {
    let op = match validated(matrix, "matrix", tol) {
        Ok(op) => op,
        Err(r) => return r,
    };
    let report = match pair {
        None => {
            let sol = intertwiner_space(&[op.matrix()]);
            if op.is_scalar() {
                VerifyOut {
                    operators: 1,
                    kernel_dim: sol.dim(),
                    expected_dim: Some(4),
                    family_deviation: None,
                    recovered_u: None,
                    ray_deviation: None,
                    pass: sol.dim() == 4,
                }
            } else {
                let family_deviation = family_of(&op).map(|fam| {
                    [fam.m1, fam.m2]
                        .iter()
                        .map(|g| span_deviation(g, &sol.kernel) / g.fro_norm())
                        .fold(0.0f64, f64::max)
                });
                let pd_consistent = pd_representative(&sol.kernel)
                    .map(|p| intertwining_residual(&op.matrix(), &p) <= ORACLE_TOL)
                    .unwrap_or(false);
                let pass = sol.dim() == 2
                    && pd_consistent
                    && family_deviation.map(|d| d <= ORACLE_TOL).unwrap_or(false);
                VerifyOut {
                    operators: 1,
                    kernel_dim: sol.dim(),
                    expected_dim: Some(2),
                    family_deviation: family_deviation.map(num),
                    recovered_u: None,
                    ray_deviation: None,
                    pass,
                }
            }
        }
        Some(pair_mat) => {
            let other = match validated(pair_mat, "pair", tol) {
                Ok(op) => op,
                Err(r) => return r,
            };
            let sol = intertwiner_space(&[op.matrix(), other.matrix()]);
            if irreducibility(&op, &other).irreducible {
                match metric_from_pair(&op, &other, tol) {
                    Ok(pm) => {
                        let unit = pm.eta.scale(c64(1.0 / pm.eta.fro_norm(), 0.0));
                        let ray = sol
                            .kernel
                            .first()
                            .map(|k| (unit - *k).fro_norm().min((unit + *k).fro_norm()))
                            .unwrap_or(f64::INFINITY);
                        VerifyOut {
                            operators: 2,
                            kernel_dim: sol.dim(),
                            expected_dim: Some(1),
                            family_deviation: None,
                            recovered_u: Some(num(pm.u)),
                            ray_deviation: Some(num(ray)),
                            pass: sol.dim() == 1 && ray <= ORACLE_TOL,
                        }
                    }
                    Err(_) => VerifyOut {
                        operators: 2,
                        kernel_dim: sol.dim(),
                        expected_dim: Some(1),
                        family_deviation: None,
                        recovered_u: None,
                        ray_deviation: None,
                        pass: false,
                    },
                }
            } else {
                // Reducible pair: the closed form must refuse; the kernel
                // dimension is reported but not constrained.
                let refused = matches!(
                    metric_from_pair(&op, &other, tol),
                    Err(qh2_core::PairMetricError::DegeneratePair)
                );
                VerifyOut {
                    operators: 2,
                    kernel_dim: sol.dim(),
                    expected_dim: None,
                    family_deviation: None,
                    recovered_u: None,
                    ray_deviation: None,
                    pass: refused,
                }
            }
        }
    };
    let code = if report.pass { 0 } else { 1 };
    (json(&report), code)
}

/// Parses arguments, runs one subcommand, writes one JSON line to `out`,
/// and returns the exit code.
pub fn run_cli(args: impl IntoIterator<Item = String>, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write!(out, "{e}");
                return 0;
            }
            _ => {
                let detail = e.to_string().lines().next().unwrap_or("bad usage").to_string();
                let (line, code) = malformed("usage", detail);
                let _ = writeln!(out, "{line}");
                return code;
            }
        },
    };
    let tol = match tolerance() {
        Ok(t) => t,
        Err((line, code)) => {
            let _ = writeln!(out, "{line}");
            return code;
        }
    };
    let (line, code) = match &cli.cmd {
        Cmd::Validate(m) => match matrix_of(&m.matrix, "matrix") {
            Ok(mat) => cmd_validate(&mat, tol),
            Err(r) => r,
        },
        Cmd::Angle(m) => match matrix_of(&m.matrix, "matrix") {
            Ok(mat) => cmd_angle(&mat, tol),
            Err(r) => r,
        },
        Cmd::Metric { matrix, u, k } => match matrix_of(&matrix.matrix, "matrix") {
            Ok(mat) => cmd_metric(&mat, *u, *k, tol),
            Err(r) => r,
        },
        Cmd::Observables {
            matrix,
            u,
            seed,
            count,
        } => match matrix_of(&matrix.matrix, "matrix") {
            Ok(mat) => cmd_observables(&mat, *u, *seed, *count, tol),
            Err(r) => r,
        },
        Cmd::PairMetric { matrix, pair } => {
            match (
                matrix_of(&matrix.matrix, "matrix"),
                matrix_of(&pair.pair, "pair"),
            ) {
                (Ok(m), Ok(p)) => cmd_pair_metric(&m, &p, tol),
                (Err(r), _) | (_, Err(r)) => r,
            }
        }
        Cmd::Irreducible { matrix, pair } => {
            match (
                matrix_of(&matrix.matrix, "matrix"),
                matrix_of(&pair.pair, "pair"),
            ) {
                (Ok(m), Ok(p)) => cmd_irreducible(&m, &p, tol),
                (Err(r), _) | (_, Err(r)) => r,
            }
        }
        Cmd::Hermitize { matrix, u, eta } => match matrix_of(&matrix.matrix, "matrix") {
            Ok(mat) => cmd_hermitize(&mat, *u, eta.as_deref(), tol),
            Err(r) => r,
        },
        Cmd::Verify { matrix, pair } => match matrix_of(&matrix.matrix, "matrix") {
            Ok(mat) => match pair {
                Some(p) => match matrix_of(p, "pair") {
                    Ok(pm) => cmd_verify(&mat, Some(&pm), tol),
                    Err(r) => r,
                },
                None => cmd_verify(&mat, None, tol),
            },
            Err(r) => r,
        },
    };
    let _ = writeln!(out, "{line}");
    code
}
