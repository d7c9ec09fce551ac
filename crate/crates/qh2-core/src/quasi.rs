//! Operator validation and the canonical angle parametrization.
//!
//! A 2x2 complex H is split as q I + H0 with H0 traceless. H is accepted
//! when q is real, the discriminant a^2 + bc of H0 is real and
//! non-negative, and H is diagonalizable. Acceptance is decided twice, by
//! those algebraic checks and by an eigendecomposition, and both routes must
//! agree; the conjunction guards each route against the other's blind spots.
//!
//! Accepted non-scalar, non-triangular operators are converted to the angle
//! form H0 = E [[cos t, e^{-i p} sin t], [e^{i p} sin t, -cos t]] with
//! complex t ("theta") and p ("phi"). The canonical branch is
//! Re t in [0, pi], Re p in [0, 2 pi), with Im t >= 0 on the boundary lines
//! Re t in {0, pi}.

use crate::mat2::{c, eigen2, mixed, Mat2, C64};
use std::f64::consts::{PI, TAU};

/// Why an operator was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RejectReason {
    #[error("non-finite-entries")]
    NonFinite,
    #[error("complex-trace")]
    ComplexTrace,
    #[error("complex-or-negative-discriminant")]
    ComplexOrNegativeDiscriminant,
    #[error("non-diagonalizable")]
    NonDiagonalizable,
}

/// A validated operator, stored with its traceless split.
#[derive(Clone, Copy, Debug)]
pub struct QuasiHermitianOp {
    matrix: Mat2,
    q: f64,
    h0: Mat2,
    gap: f64,
    scalar: bool,
}

impl QuasiHermitianOp {
    /// Validates `m` at tolerance `tol` (see [`crate::tol::DEFAULT_TOL`]).
    pub fn validate(m: &Mat2, tol: f64) -> Result<Self, RejectReason> {
        validate_quasi_hermitian(m, tol)
    }

    /// The original matrix.
    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    /// Real half-trace q.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Exactly traceless part [[a, b], [c, -a]].
    pub fn traceless(&self) -> Mat2 {
        self.h0
    }

    /// Half the eigenvalue gap, E = sqrt(a^2 + bc) >= 0.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// True when the operator is a real multiple of the identity within
    /// tolerance; such operators have no angle form.
    pub fn is_scalar(&self) -> bool {
        self.scalar
    }

    /// Canonical angle parametrization of the traceless part.
    pub fn to_angle_form(&self) -> Result<AngleForm, AngleFormError> {
        to_angle_form(self)
    }
}

/// Validates a matrix as q I + H0 with real q, real non-negative
/// discriminant and a diagonalizable full matrix.
pub fn validate_quasi_hermitian(m: &Mat2, tol: f64) -> Result<QuasiHermitianOp, RejectReason> {
    if !m.is_finite() {
        return Err(RejectReason::NonFinite);
    }

    let half_trace = m.trace() * c(0.5, 0.0);
    if half_trace.im.abs() > tol * mixed(half_trace.norm()) {
        return Err(RejectReason::ComplexTrace);
    }
    let q = half_trace.re;

    // Exactly traceless representative; the residue i Im(tr)/2 I discarded
    // here is below tolerance by the check above.
    let a = (m.e[0][0] - m.e[1][1]) * c(0.5, 0.0);
    let h0 = Mat2::new(a, m.e[0][1], m.e[1][0], -a);

    let disc = a * a + m.e[0][1] * m.e[1][0];
    let disc_scale = mixed(disc.norm());
    if disc.im.abs() > tol * disc_scale || disc.re < -tol * disc_scale {
        return Err(RejectReason::ComplexOrNegativeDiscriminant);
    }
    let gap = disc.re.max(0.0).sqrt();

    let h0_norm = h0.fro_norm();
    let mut scalar = false;
    if gap <= 0.5 * tol * mixed(h0_norm) {
        // Coincident eigenvalues: only the scalar operator is acceptable.
        if h0_norm > tol * mixed(q.abs()) {
            return Err(RejectReason::NonDiagonalizable);
        }
        scalar = true;
    }

    // Independent route: explicit eigendecomposition.
    let eig = eigen2(m);
    if !eig.diagonalizable {
        return Err(RejectReason::NonDiagonalizable);
    }
    let m_scale = mixed(m.fro_norm());
    if eig.values.iter().any(|l| l.im.abs() > tol * m_scale) {
        return Err(RejectReason::ComplexOrNegativeDiscriminant);
    }

    Ok(QuasiHermitianOp {
        matrix: *m,
        q,
        h0,
        gap: if scalar { 0.0 } else { gap },
        scalar,
    })
}

/// Why an accepted operator has no canonical angle form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AngleFormError {
    #[error("scalar-operator")]
    Scalar,
    #[error("triangular-unrepresentable")]
    Triangular,
    #[error("numerical-underflow")]
    Underflow,
}

/// Angle parameters outside the canonical domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("angle parameters outside the canonical domain")]
pub struct AngleDomainError;

/// Canonical angle form (q, E, theta, phi) of a validated operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleForm {
    q: f64,
    gap: f64,
    theta: C64,
    phi: C64,
}

impl AngleForm {
    /// Builds an angle form, enforcing the canonical domain: E > 0,
    /// Re theta in [0, pi], Re phi in [0, 2 pi), all parts finite.
    pub fn new(q: f64, gap: f64, theta: C64, phi: C64) -> Result<Self, AngleDomainError> {
        let finite =
            q.is_finite() && gap.is_finite() && theta.is_finite() && phi.is_finite();
        if !finite
            || gap <= 0.0
            || !(0.0..=PI).contains(&theta.re)
            || !(0.0..TAU).contains(&phi.re)
        {
            return Err(AngleDomainError);
        }
        Ok(AngleForm { q, gap, theta, phi })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// E > 0.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn theta(&self) -> C64 {
        self.theta
    }

    pub fn phi(&self) -> C64 {
        self.phi
    }

    /// True when theta sits exactly on a real endpoint, where sin theta is
    /// exactly zero and the operator is diagonal.
    pub fn sin_is_zero(&self) -> bool {
        self.theta.im == 0.0 && (self.theta.re == 0.0 || self.theta.re == PI)
    }

    /// sin theta, exactly zero on the real endpoints.
    pub fn sin_theta(&self) -> C64 {
        if self.sin_is_zero() {
            c(0.0, 0.0)
        } else {
            self.theta.sin()
        }
    }

    /// cos theta, exactly +-1 on the real endpoints.
    pub fn cos_theta(&self) -> C64 {
        if self.sin_is_zero() {
            c(if self.theta.re == 0.0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            self.theta.cos()
        }
    }

    /// Reconstructs the operator q I + E [[cos t, e^{-ip} sin t],
    /// [e^{ip} sin t, -cos t]].
    pub fn to_operator(&self) -> QuasiHermitianOp {
        let e = c(self.gap, 0.0);
        let st = self.sin_theta();
        let ct = self.cos_theta();
        let em = (-C64::i() * self.phi).exp();
        let ep = (C64::i() * self.phi).exp();
        let a = e * ct;
        let b = e * em * st;
        let cc = e * ep * st;
        let h0 = Mat2::new(a, b, cc, -a);
        let matrix = Mat2::scalar(c(self.q, 0.0)) + h0;
        QuasiHermitianOp {
            matrix,
            q: self.q,
            h0,
            gap: self.gap,
            scalar: false,
        }
    }
}

/// Recovers the canonical angle form. The working variable is
/// xi = a/E + i w with w a square root of bc / E^2, so that xi = e^{i theta}
/// and theta = -i Ln(xi); the branch of w is chosen to land Re theta in
/// [0, pi] with Im theta >= 0 on the boundary. This avoids the
/// ill-conditioned arccos near the endpoints: cos theta and sin theta equal
/// a/E and w to machine precision by construction.
fn to_angle_form(op: &QuasiHermitianOp) -> Result<AngleForm, AngleFormError> {
    if op.scalar {
        return Err(AngleFormError::Scalar);
    }
    let e = op.gap;
    let a = op.h0.e[0][0];
    let b = op.h0.e[0][1];
    let cc = op.h0.e[1][0];

    let b_zero = b.norm() == 0.0;
    let c_zero = cc.norm() == 0.0;
    if b_zero && c_zero {
        // Diagonal: a = +-E up to tolerance.
        let theta = if a.re > 0.0 { c(0.0, 0.0) } else { c(PI, 0.0) };
        let form = AngleForm::new(op.q, e, theta, c(0.0, 0.0))
            .expect("diagonal angle form is always in domain");
        return Ok(form);
    }
    if b_zero || c_zero {
        return Err(AngleFormError::Triangular);
    }

    let z = a / c(e, 0.0);
    let mut w = (b * cc).sqrt() / c(e, 0.0);
    if w.norm() == 0.0 {
        // b c underflowed to zero with both entries nonzero.
        return Err(AngleFormError::Underflow);
    }
    let mut xi = z + C64::i() * w;
    let flip = xi.im < 0.0 || (xi.im == 0.0 && xi.norm() > 1.0);
    if flip {
        w = -w;
        xi = z + C64::i() * w;
    }
    // Ln(xi) loses the distance to the endpoints to cancellation when
    // |sin theta| is tiny, so near the endpoints theta is rebuilt from w
    // alone via the asin series; asin(w) = -i Ln(i w + sqrt(1 - w^2))
    // shares the principal cuts of the Ln branch, so the two paths agree on
    // the overlap.
    let theta = if w.norm() <= 0.1 {
        let psi = asin_small(w);
        if xi.re >= 0.0 {
            psi
        } else {
            c(PI, 0.0) - psi
        }
    } else {
        -C64::i() * xi.ln()
    };
    let theta = c(theta.re.clamp(0.0, PI), theta.im);

    // e^{-i phi} = b / (E sin theta) with sin theta = w by construction.
    let mu = b / (c(e, 0.0) * w);
    let log_mu = mu.ln();
    let phi = c((-log_mu.im).rem_euclid(TAU), log_mu.re);

    if !theta.is_finite() || !phi.is_finite() {
        return Err(AngleFormError::Underflow);
    }
    // Floating-point arg can land exactly on pi only via the flip rule, so
    // the domain check cannot fail; keep it as a hard invariant anyway.
    AngleForm::new(op.q, e, theta, phi).map_err(|_| AngleFormError::Underflow)
}

/// Discriminant a^2 + bc of the traceless part of an arbitrary matrix,
/// without any validation. Real and non-negative exactly when the matrix
/// has a real spectrum symmetric about its half-trace.
pub fn traceless_discriminant(m: &Mat2) -> C64 {
    let a = (m.e[0][0] - m.e[1][1]) * c(0.5, 0.0);
    a * a + m.e[0][1] * m.e[1][0]
}

/// Principal asin by Maclaurin series, valid for |w| <= 0.1. The library
/// asin routes through Ln(sqrt(1 - w^2) + i w), which cancels for small w;
/// the series keeps full relative precision there.
fn asin_small(w: C64) -> C64 {
    let w2 = w * w;
    let mut term = w;
    let mut sum = w;
    for n in 1..=12u32 {
        let n = f64::from(n);
        term = term * w2 * c((2.0 * n - 1.0) * (2.0 * n - 1.0) / (2.0 * n * (2.0 * n + 1.0)), 0.0);
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
    }
    sum
}
