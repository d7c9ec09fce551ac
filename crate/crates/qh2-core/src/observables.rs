//! Observables compatible with a fixed metric, irreducibility of operator
//! pairs, recovery of the metric from an irreducible pair, and
//! hermitization.
//!
//! For eta = k [[s, conj(l)], [l, r]] the condition H'^dagger eta = eta H'
//! on H' = q' I + [[a', b'], [c', -a']] is equivalent to q' real plus
//!
//!   Im(l b') = r Im a',   Im(l conj(c')) = s Im a',
//!   s b' - r conj(c') = 2 conj(l) Re a'.
//!
//! When l = 0 (diagonal metric) these decouple: Im a' = 0 and
//! c' = (s/r) conj(b'), leaving Re a' and b' free. Otherwise a' and the
//! real number w = Re(l b') are free and b', c' follow. Every equation is
//! linear in the family parameter u, which is what makes the metric
//! recoverable from a second operator.

use crate::mat2::{c, mixed, pd_sqrt, Mat2, C64};
use crate::metric::{
    dual_basis_family, metric_coefficients, metric_for, pseudo_hermitian_residual, FamilyChart,
    MetricParams,
};
use crate::quasi::{AngleForm, QuasiHermitianOp};
use crate::tol::{CASE_SPLIT_TOL, IRREDUCIBILITY_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Structure of the compatibility constraints at a given (theta, phi, u).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricCase {
    /// The metric is diagonal (l = 0): constraints decouple.
    Diagonal,
    /// Off-diagonal metric: b' and c' are coupled to a'.
    Coupled,
}

/// Metric entries at k = 1 together with the detected case.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintData {
    pub s: f64,
    pub l: C64,
    pub r: f64,
    pub case: MetricCase,
}

/// Entries of eta(1, u) and the case split deciding which parameters of a
/// compatible observable are free.
pub fn constraint_data(af: &AngleForm, u: f64) -> ConstraintData {
    let params = MetricParams::new(1.0, u).expect("u must be positive and finite");
    let eta = metric_for(af, &params);
    let l = eta.e[1][0];
    let zeta = metric_coefficients(af).zeta;
    let case = if l.norm() <= CASE_SPLIT_TOL * mixed(zeta.norm() * (1.0 + u)) {
        MetricCase::Diagonal
    } else {
        MetricCase::Coupled
    };
    ConstraintData {
        s: eta.e[0][0].re,
        l,
        r: eta.e[1][1].re,
        case,
    }
}

/// Free parameters of a compatible observable, per case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ObservableParams {
    /// Diagonal metric: real a' and free b'.
    Diagonal { re_a: f64, b: C64 },
    /// Off-diagonal metric: free a' and the real number w = Re(l b').
    Coupled { a: C64, w: f64 },
}

/// A compatible observable in free-parameter form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableSpec {
    /// Real half-trace of the observable.
    pub q: f64,
    pub params: ObservableParams,
}

/// Parameter kind does not match the metric's case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("case-mismatch")]
pub struct CaseMismatch;

/// Builds the unique compatible observable with the given free parameters
/// for the metric eta(k, u) of `af` (any k > 0 gives the same constraint).
pub fn construct_compatible(
    af: &AngleForm,
    u: f64,
    spec: &ObservableSpec,
) -> Result<Mat2, CaseMismatch> {
    let data = constraint_data(af, u);
    let (a, b) = match (data.case, spec.params) {
        (MetricCase::Diagonal, ObservableParams::Diagonal { re_a, b }) => (c(re_a, 0.0), b),
        (MetricCase::Coupled, ObservableParams::Coupled { a, w }) => {
            let b = (c(w, 0.0) + C64::i() * c(data.r * a.im, 0.0)) / data.l;
            (a, b)
        }
        _ => return Err(CaseMismatch),
    };
    let ratio = data.s / data.r;
    let cc = match data.case {
        MetricCase::Diagonal => b.conj() * c(ratio, 0.0),
        MetricCase::Coupled => {
            b.conj() * c(ratio, 0.0) - data.l * c(2.0 * a.re / data.r, 0.0)
        }
    };
    Ok(Mat2::new(c(spec.q, 0.0) + a, b, cc, c(spec.q, 0.0) - a))
}

/// The manifestly non-negative part of the discriminant of a constructed
/// observable: Re(a'^2 + b'c') equals margin plus non-negative terms, so a
/// correct construction keeps this at or above zero up to rounding.
pub fn compatibility_margin(af: &AngleForm, u: f64, spec: &ObservableSpec) -> f64 {
    let data = constraint_data(af, u);
    match spec.params {
        ObservableParams::Diagonal { re_a, b } => {
            re_a * re_a + data.s / data.r * b.norm_sqr()
        }
        ObservableParams::Coupled { a, w } => {
            let l2 = data.l.norm_sqr();
            let x = a.re;
            (l2 * (x * x - 2.0 * w * x / data.r) + data.s * w * w / data.r)
                / (data.r * data.s - l2)
        }
    }
}

/// Outcome of the common-eigenvector test on a pair of operators.
#[derive(Clone, Copy, Debug)]
pub struct IrreducibilityReport {
    /// (b c' - c b')^2 - 4 (a b' - b a')(a c' - c a'); zero exactly when
    /// the traceless parts share an eigenvector.
    pub delta: C64,
    /// det of [H0, H0'], equal to -delta; computed independently.
    pub commutator_det: C64,
    /// max of the two traceless Frobenius norms; delta scales as its 4th
    /// power.
    pub scale: f64,
    pub irreducible: bool,
}

/// Tests whether the traceless parts share an eigenvector.
pub fn irreducibility(op: &QuasiHermitianOp, other: &QuasiHermitianOp) -> IrreducibilityReport {
    irreducibility_raw(&op.traceless(), &other.traceless())
}

/// Same test on raw matrices; any trace is projected out first.
pub fn irreducibility_raw(m: &Mat2, other: &Mat2) -> IrreducibilityReport {
    let h0 = *m - Mat2::scalar(m.trace() / c(2.0, 0.0));
    let h0p = *other - Mat2::scalar(other.trace() / c(2.0, 0.0));
    let (a, b, cc) = (h0.e[0][0], h0.e[0][1], h0.e[1][0]);
    let (ap, bp, cp) = (h0p.e[0][0], h0p.e[0][1], h0p.e[1][0]);
    let cross = b * cp - cc * bp;
    let delta = cross * cross - (a * bp - b * ap) * (a * cp - cc * ap) * c(4.0, 0.0);
    let commutator_det = crate::mat2::commutator(&h0, &h0p).det();
    let scale = h0.fro_norm().max(h0p.fro_norm());
    IrreducibilityReport {
        delta,
        commutator_det,
        scale,
        irreducible: delta.norm() > IRREDUCIBILITY_TOL * scale.powi(4),
    }
}

/// Metric recovered from an irreducible pair, at k = 1.
#[derive(Clone, Copy, Debug)]
pub struct PairMetric {
    pub eta: Mat2,
    /// Family parameter in the chart below.
    pub u: f64,
    /// Re(l b') when the coupled solve produced one.
    pub w: Option<f64>,
    pub chart: FamilyChart,
}

/// Why no metric could be recovered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PairMetricError {
    /// The pair shares an eigenvector (or an operator is scalar): the
    /// compatible metrics, if any, are not unique up to scale.
    #[error("degenerate-pair")]
    DegeneratePair,
    /// The pair is irreducible but no positive u satisfies the constraints.
    #[error("no-compatible-metric")]
    NoCompatibleMetric,
}

/// Recovers the unique (up to scale) metric making both operators
/// compatible, or reports why none exists. Both inputs must already be
/// validated; `tol` gates the a-posteriori pseudo-Hermiticity check.
pub fn metric_from_pair(
    op: &QuasiHermitianOp,
    other: &QuasiHermitianOp,
    tol: f64,
) -> Result<PairMetric, PairMetricError> {
    if !irreducibility(op, other).irreducible {
        return Err(PairMetricError::DegeneratePair);
    }

    let h0p = other.traceless();
    let (ap, bp, cp) = (h0p.e[0][0], h0p.e[0][1], h0p.e[1][0]);

    let candidate = match op.to_angle_form() {
        Ok(af) => {
            let (u, w) = solve_angle_chart(&af, ap, bp, cp, other)?;
            if !(u.is_finite() && u > 0.0) {
                return Err(PairMetricError::NoCompatibleMetric);
            }
            let params =
                MetricParams::new(1.0, u).map_err(|_| PairMetricError::NoCompatibleMetric)?;
            PairMetric {
                eta: metric_for(&af, &params),
                u,
                w,
                chart: FamilyChart::Angle(af),
            }
        }
        Err(crate::quasi::AngleFormError::Scalar) => {
            return Err(PairMetricError::DegeneratePair);
        }
        Err(_) => {
            // Triangular (or underflowed) operators: same family through
            // the dual eigenbasis chart, solved by least squares on the
            // intertwining defect u C1 + C2 = 0.
            let fam = dual_basis_family(op).ok_or(PairMetricError::DegeneratePair)?;
            let hp = other.matrix();
            let c1 = hp.adjoint() * fam.m1 - fam.m1 * hp;
            let c2 = hp.adjoint() * fam.m2 - fam.m2 * hp;
            let denom = c1.fro_norm().powi(2);
            if denom <= 1e-24 * mixed(hp.fro_norm()).powi(2) {
                return Err(PairMetricError::NoCompatibleMetric);
            }
            let mut num = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    num += (c1.e[p][q].conj() * c2.e[p][q]).re;
                }
            }
            let u = -num / denom;
            if !(u.is_finite() && u > 0.0) {
                return Err(PairMetricError::NoCompatibleMetric);
            }
            let params =
                MetricParams::new(1.0, u).map_err(|_| PairMetricError::NoCompatibleMetric)?;
            PairMetric { eta: fam.eval(&params), u, w: None, chart: FamilyChart::DualBasis }
        }
    };

    let ok = check_both(op, other, &candidate.eta, tol);
    if ok {
        Ok(candidate)
    } else {
        Err(PairMetricError::NoCompatibleMetric)
    }
}

fn check_both(op: &QuasiHermitianOp, other: &QuasiHermitianOp, eta: &Mat2, tol: f64) -> bool {
    eta.is_finite()
        && eta.trace().re > 0.0
        && eta.det().re > 0.0
        && pseudo_hermitian_residual(&op.matrix(), eta) <= tol
        && pseudo_hermitian_residual(&other.matrix(), eta) <= tol
}

/// Solves for (u, w) in the angle chart. Routes, tried in order: exact
/// diagonal operators (sin theta = 0) reduce to one complex equation linear
/// in u; real theta with the decoupled form already satisfied pins u = 1;
/// otherwise the coupled 2x2 real system in (u, w), falling back to a
/// stacked least-squares in u alone when that system is rank-deficient.
fn solve_angle_chart(
    af: &AngleForm,
    ap: C64,
    bp: C64,
    cp: C64,
    other: &QuasiHermitianOp,
) -> Result<(f64, Option<f64>), PairMetricError> {
    let growth = (2.0 * af.phi().im).exp();

    if af.sin_is_zero() {
        // Diagonal operator: c' r(u) = s(u) conj(b') with one of r, s
        // constant. Irreducibility guarantees b' c' != 0 here.
        let at_zero = af.theta().re == 0.0;
        let (x, y) = if at_zero {
            (bp.conj(), cp * c(growth, 0.0))
        } else {
            (cp * c(growth, 0.0), bp.conj())
        };
        if x.norm_sqr() == 0.0 {
            return Err(PairMetricError::NoCompatibleMetric);
        }
        let u = (x.conj() * y).re / x.norm_sqr();
        return Ok((u, None));
    }

    let scale = mixed(other.traceless().fro_norm());
    if af.theta().im == 0.0 {
        // Real theta: u = 1 is the one diagonal-metric point of the family.
        let data = constraint_data(af, 1.0);
        let decoupled = ap.im.abs() <= 1e-9 * scale
            && (cp - bp.conj() * c(data.s / data.r, 0.0)).norm() <= 1e-9 * scale;
        if decoupled {
            return Ok((1.0, None));
        }
    }

    let co = metric_coefficients(af);
    let zeta = co.zeta;
    let phase = (C64::i() * af.phi().conj()).exp();
    let beta = bp * phase;
    let bz_star = beta * zeta.conj();
    let bz = beta * zeta;

    // 2x2 system in (u, w) from Re and Im of l b' = w + i r Im a'.
    let coef = bz_star.im - growth * co.m_b * ap.im;
    let rhs = bz.im + growth * co.m_a * ap.im;
    let row_scale = mixed(bz_star.norm().max(growth * (co.m_a + co.m_b) * ap.im.abs()));
    if coef.abs() > 1e-12 * row_scale {
        let u = rhs / coef;
        let w = u * bz_star.re - bz.re;
        return Ok((u, Some(w)));
    }

    // Rank-deficient (typically b' = 0 or everything real): stack the
    // u-linear real equations from all three constraints and least-square.
    let phase_m = (-C64::i() * af.phi()).exp();
    let gamma = cp.conj() * phase;
    let gz_star = gamma * zeta.conj();
    let gz = gamma * zeta;
    let mut rows: Vec<(f64, f64)> = vec![
        // Im(l b') = r Im a'
        (bz_star.im - growth * co.m_b * ap.im, bz.im + growth * co.m_a * ap.im),
        // Im(l conj(c')) = s Im a'
        (gz_star.im - co.m_a * ap.im, gz.im + co.m_b * ap.im),
    ];
    // s b' - r conj(c') = 2 conj(l) Re a', split into Re and Im.
    let lhs_u = bp * c(co.m_a, 0.0) - cp.conj() * c(growth * co.m_b, 0.0)
        - phase_m * zeta * c(2.0 * ap.re, 0.0);
    let rhs_c = -bp * c(co.m_b, 0.0) + cp.conj() * c(growth * co.m_a, 0.0)
        - phase_m * zeta.conj() * c(2.0 * ap.re, 0.0);
    rows.push((lhs_u.re, rhs_c.re));
    rows.push((lhs_u.im, rhs_c.im));

    let (mut num, mut den) = (0.0, 0.0);
    for (coef, rhs) in &rows {
        num += coef * rhs;
        den += coef * coef;
    }
    if den <= 1e-24 * scale * scale {
        return Err(PairMetricError::NoCompatibleMetric);
    }
    let u = num / den;
    let w = u * bz_star.re - bz.re;
    Ok((u, Some(w)))
}

/// Result of conjugating an operator into Hermitian form.
#[derive(Clone, Copy, Debug)]
pub struct Hermitized {
    /// S H S^{-1} with S the positive square root of the metric.
    pub hermitian: Mat2,
    /// The similarity S = eta^{1/2}.
    pub transform: Mat2,
}

/// Hermitization failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HermitizeError {
    #[error("metric-not-positive")]
    MetricNotPositive,
}

/// Conjugates H by the positive square root of a metric:
/// h = eta^{1/2} H eta^{-1/2} is Hermitian whenever eta intertwines H with
/// its adjoint, and has the same spectrum as H.
pub fn hermitize(h: &Mat2, eta: &Mat2) -> Result<Hermitized, HermitizeError> {
    let s = pd_sqrt(eta).map_err(|_| HermitizeError::MetricNotPositive)?;
    let s_inv = s.inverse().ok_or(HermitizeError::MetricNotPositive)?;
    Ok(Hermitized { hermitian: s * *h * s_inv, transform: s })
}

/// Draws `count` observables compatible with eta(k, u) of `af`, with the
/// half-trace in [-1, 1] and the free parameters in [-3, 3] boxes. In the
/// coupled case the box is placed on (Re a', b') and the remaining
/// parameters are derived, which keeps every entry bounded by a fixed
/// multiple of the box. Deterministic in `seed`.
pub fn sample_compatible(af: &AngleForm, u: f64, seed: u64, count: usize) -> Vec<Mat2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = constraint_data(af, u);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let q = rng.random_range(-1.0..=1.0);
        let params = match data.case {
            MetricCase::Diagonal => ObservableParams::Diagonal {
                re_a: rng.random_range(-3.0..=3.0),
                b: c(rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0)),
            },
            MetricCase::Coupled => {
                let re_a = rng.random_range(-3.0..=3.0);
                let b = c(rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0));
                let lb = data.l * b;
                ObservableParams::Coupled {
                    a: c(re_a, lb.im / data.r),
                    w: lb.re,
                }
            }
        };
        let spec = ObservableSpec { q, params };
        let h = construct_compatible(af, u, &spec)
            .expect("sampled parameters always match the case");
        out.push(h);
    }
    out
}
