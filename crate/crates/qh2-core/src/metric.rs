//! The two-parameter family of metric operators of a validated operator.
//!
//! For H = q I + H0 in angle form, every Hermitian positive-definite eta
//! with H^dagger eta = eta H is k (u M1 + M2) with k > 0, u > 0, where M1
//! and M2 are rank-one projectors built from the eigenvectors of H^dagger.
//! The entries only need three scalars:
//!
//!   mA = |cos(theta/2)|^2,  mB = |sin(theta/2)|^2,
//!   zeta = sin(theta/2) cos(theta*/2) = (sin Re theta + i sinh Im theta)/2,
//!
//! giving eta = k [[s, conj(l)], [l, r]] with s = mA u + mB,
//! l = e^{i conj(phi)} (u conj(zeta) - zeta), r = e^{2 Im phi} (mA + mB u).
//! The identity |zeta|^2 = mA mB makes det eta = k^2 e^{2 Im phi} u.
//!
//! Operators without an angle form (triangular ones) get the same family
//! through the dual eigenbasis chart instead.

use crate::mat2::{c, eigen2, mixed, Mat2, Vec2, C64};
use crate::quasi::{AngleForm, QuasiHermitianOp};

/// Scalars determining every metric entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricCoefficients {
    /// |cos(theta/2)|^2 = cos^2(Re/2) + sinh^2(Im/2); exactly 1 or 0 on the
    /// real endpoints.
    pub m_a: f64,
    /// |sin(theta/2)|^2 = sin^2(Re/2) + sinh^2(Im/2).
    pub m_b: f64,
    /// sin(theta/2) cos(theta*/2); exactly zero on the real endpoints.
    pub zeta: C64,
}

/// Evaluates the coefficient scalars from the angle form.
pub fn metric_coefficients(af: &AngleForm) -> MetricCoefficients {
    if af.sin_is_zero() {
        let at_zero = af.theta().re == 0.0;
        return MetricCoefficients {
            m_a: if at_zero { 1.0 } else { 0.0 },
            m_b: if at_zero { 0.0 } else { 1.0 },
            zeta: c(0.0, 0.0),
        };
    }
    let x = af.theta().re;
    let y = af.theta().im;
    let sh = (0.5 * y).sinh();
    let m_a = (0.5 * x).cos().powi(2) + sh * sh;
    let m_b = (0.5 * x).sin().powi(2) + sh * sh;
    let zeta = c(0.5 * x.sin(), 0.5 * y.sinh());
    MetricCoefficients { m_a, m_b, zeta }
}

/// Eigenvectors of H^dagger for the eigenvalues q + E and q - E, in that
/// order, in the normalization used by the closed-form family.
pub fn adjoint_eigenvectors(af: &AngleForm) -> [Vec2; 2] {
    let half = af.theta().conj() * c(0.5, 0.0);
    let phase = (C64::i() * af.phi().conj()).exp();
    let plus = Vec2::new(half.cos(), phase * half.sin());
    let minus = Vec2::new(half.sin(), -phase * half.cos());
    [plus, minus]
}

/// Positive family parameters (k, u).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams {
    k: f64,
    u: f64,
}

/// Rejected family parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("metric parameters must be finite and positive")]
pub struct InvalidMetricParams;

impl MetricParams {
    pub fn new(k: f64, u: f64) -> Result<Self, InvalidMetricParams> {
        if k.is_finite() && u.is_finite() && k > 0.0 && u > 0.0 {
            Ok(MetricParams { k, u })
        } else {
            Err(InvalidMetricParams)
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn u(&self) -> f64 {
        self.u
    }
}

/// Metric at (k, u) from the closed-form entries.
pub fn metric_for(af: &AngleForm, params: &MetricParams) -> Mat2 {
    let MetricCoefficients { m_a, m_b, zeta } = metric_coefficients(af);
    let u = params.u;
    let k = params.k;
    let growth = (2.0 * af.phi().im).exp();
    let phase = (C64::i() * af.phi().conj()).exp();
    let s = m_a * u + m_b;
    let l = phase * (zeta.conj() * c(u, 0.0) - zeta);
    let r = growth * (m_a + m_b * u);
    Mat2::new(c(k * s, 0.0), (l * c(k, 0.0)).conj(), l * c(k, 0.0), c(k * r, 0.0))
}

/// Which construction produced a family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyChart {
    /// Closed-form entries from the angle form.
    Angle(AngleForm),
    /// Dual eigenbasis projectors; used when no angle form exists. The
    /// parameter u of this chart differs from the angle chart by a fixed
    /// positive factor.
    DualBasis,
}

/// The full metric family eta(k, u) = k (u M1 + M2).
#[derive(Clone, Copy, Debug)]
pub struct MetricFamily {
    /// Rank-one projector scaling with u.
    pub m1: Mat2,
    /// Rank-one projector independent of u.
    pub m2: Mat2,
    pub chart: FamilyChart,
}

impl MetricFamily {
    pub fn eval(&self, params: &MetricParams) -> Mat2 {
        (self.m1.scale(c(params.u, 0.0)) + self.m2).scale(c(params.k, 0.0))
    }
}

/// Family in the angle chart: M1 and M2 from the coefficient scalars.
pub fn metric_family(af: &AngleForm) -> MetricFamily {
    let MetricCoefficients { m_a, m_b, zeta } = metric_coefficients(af);
    let growth = (2.0 * af.phi().im).exp();
    let phase_m = (-C64::i() * af.phi()).exp();
    let phase_p = (C64::i() * af.phi().conj()).exp();
    let m1 = Mat2::new(
        c(m_a, 0.0),
        phase_m * zeta,
        phase_p * zeta.conj(),
        c(growth * m_b, 0.0),
    );
    let m2 = Mat2::new(
        c(m_b, 0.0),
        -phase_m * zeta.conj(),
        -phase_p * zeta,
        c(growth * m_a, 0.0),
    );
    MetricFamily { m1, m2, chart: FamilyChart::Angle(*af) }
}

/// Family from the dual eigenbasis of any validated non-scalar operator,
/// including triangular ones: columns of (V^dagger)^{-1} for the
/// eigenvector matrix V of H, ordered with the q + E eigenvalue first.
/// Returns `None` for scalar operators, whose family is all of the
/// positive-definite cone.
pub fn dual_basis_family(op: &QuasiHermitianOp) -> Option<MetricFamily> {
    if op.is_scalar() {
        return None;
    }
    let eig = eigen2(&op.matrix());
    let (vp, vm) = if eig.values[0].re >= eig.values[1].re {
        (eig.vectors[0], eig.vectors[1])
    } else {
        (eig.vectors[1], eig.vectors[0])
    };
    let v = Mat2::new(vp.x, vm.x, vp.y, vm.y);
    let w = v.adjoint().inverse()?;
    let w1 = Vec2::new(w.e[0][0], w.e[1][0]);
    let w2 = Vec2::new(w.e[0][1], w.e[1][1]);
    Some(MetricFamily {
        m1: Mat2::outer(&w1, &w1),
        m2: Mat2::outer(&w2, &w2),
        chart: FamilyChart::DualBasis,
    })
}

/// Relative size of H^dagger eta - eta H.
pub fn pseudo_hermitian_residual(h: &Mat2, eta: &Mat2) -> f64 {
    let raw = (h.adjoint() * *eta - *eta * *h).fro_norm();
    raw / (mixed(h.fro_norm()) * mixed(eta.fro_norm()))
}

/// True when eta intertwines H and its adjoint within tolerance.
pub fn check_pseudo_hermitian(h: &Mat2, eta: &Mat2, tol: f64) -> bool {
    pseudo_hermitian_residual(h, eta) <= tol
}

/// The sesquilinear form x^dagger eta y.
pub fn eta_inner(eta: &Mat2, x: &Vec2, y: &Vec2) -> C64 {
    x.dot(&eta.apply(y))
}
