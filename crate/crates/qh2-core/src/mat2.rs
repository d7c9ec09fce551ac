//! 2x2 complex matrix kernel: exact arithmetic, commutators, a closed-form
//! eigendecomposition, and the principal square root of a Hermitian
//! positive-definite matrix. Everything here is branch-deterministic so that
//! identical inputs always produce bitwise-identical outputs.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Shorthand constructor for [`C64`].
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    c64(re, im)
}

/// Mixed tolerance scale: absolute floor of 1 below unit scale, relative above.
#[inline]
pub fn mixed(scale: f64) -> f64 {
    scale.max(1.0)
}

/// Column vector in C^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2 {
    pub x: C64,
    pub y: C64,
}

impl Vec2 {
    pub const fn new(x: C64, y: C64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr()).sqrt()
    }

    /// Inner product, conjugate-linear in `self`.
    pub fn dot(&self, other: &Vec2) -> C64 {
        self.x.conj() * other.x + self.y.conj() * other.y
    }

    pub fn scale(&self, s: C64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    /// Unit-normalized copy with the dominant component rotated to the
    /// positive real axis, so eigenvector output is phase-deterministic.
    pub fn normalized(&self) -> Vec2 {
        let n = self.norm();
        let p = if self.x.norm() >= self.y.norm() { self.x } else { self.y };
        let phase = if p.norm() > 0.0 { p.conj() / p.norm() } else { c(1.0, 0.0) };
        self.scale(phase / n)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Dense 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub const fn new(e00: C64, e01: C64, e10: C64, e11: C64) -> Self {
        Mat2 { e: [[e00, e01], [e10, e11]] }
    }

    pub fn zero() -> Self {
        Mat2::scalar(c(0.0, 0.0))
    }

    pub fn identity() -> Self {
        Mat2::scalar(c(1.0, 0.0))
    }

    pub fn scalar(z: C64) -> Self {
        Mat2::new(z, c(0.0, 0.0), c(0.0, 0.0), z)
    }

    pub fn from_rows(rows: [[C64; 2]; 2]) -> Self {
        Mat2 { e: rows }
    }

    /// Outer product v w^dagger.
    pub fn outer(v: &Vec2, w: &Vec2) -> Self {
        Mat2::new(
            v.x * w.x.conj(),
            v.x * w.y.conj(),
            v.y * w.x.conj(),
            v.y * w.y.conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn fro_norm(&self) -> f64 {
        (self.e[0][0].norm_sqr()
            + self.e[0][1].norm_sqr()
            + self.e[1][0].norm_sqr()
            + self.e[1][1].norm_sqr())
        .sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2::new(
            self.e[0][0] * s,
            self.e[0][1] * s,
            self.e[1][0] * s,
            self.e[1][1] * s,
        )
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.e[0][0] * v.x + self.e[0][1] * v.y,
            self.e[1][0] * v.x + self.e[1][1] * v.y,
        )
    }

    /// Closed-form inverse; `None` when the determinant vanishes exactly or
    /// the entries are not finite.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        let inv = Mat2::new(self.e[1][1], -self.e[0][1], -self.e[1][0], self.e[0][0])
            .scale(c(1.0, 0.0) / d);
        inv.is_finite().then_some(inv)
    }

    pub fn is_finite(&self) -> bool {
        self.e.iter().flatten().all(|z| z.is_finite())
    }

    /// Frobenius distance to the adjoint, the Hermiticity defect.
    pub fn herm_defect(&self) -> f64 {
        (*self - self.adjoint()).fro_norm()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] + rhs.e[0][0],
            self.e[0][1] + rhs.e[0][1],
            self.e[1][0] + rhs.e[1][0],
            self.e[1][1] + rhs.e[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] - rhs.e[0][0],
            self.e[0][1] - rhs.e[0][1],
            self.e[1][0] - rhs.e[1][0],
            self.e[1][1] - rhs.e[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] * rhs.e[0][0] + self.e[0][1] * rhs.e[1][0],
            self.e[0][0] * rhs.e[0][1] + self.e[0][1] * rhs.e[1][1],
            self.e[1][0] * rhs.e[0][0] + self.e[1][1] * rhs.e[1][0],
            self.e[1][0] * rhs.e[0][1] + self.e[1][1] * rhs.e[1][1],
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(c(-1.0, 0.0))
    }
}

/// AB - BA.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    *a * *b - *b * *a
}

/// Closed-form eigendecomposition of a 2x2 complex matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    /// Eigenvalues in the order given by the principal branch of the
    /// quadratic formula; not sorted.
    pub values: [C64; 2],
    /// Unit eigenvectors matching `values`; for a defective matrix both
    /// entries hold the single eigendirection.
    pub vectors: [Vec2; 2],
    /// False exactly when the eigenvalues coincide within tolerance and the
    /// matrix is not a scalar multiple of the identity within tolerance.
    pub diagonalizable: bool,
}

/// Eigenvalue-coincidence and scalar-matrix tolerance used by [`eigen2`].
pub const EIGEN_DEGENERACY_TOL: f64 = 1e-9;

/// Eigendecomposition via the quadratic formula on trace and determinant.
pub fn eigen2(m: &Mat2) -> Eigen2 {
    let t = m.trace();
    let d = m.det();
    let sq = (t * t - d.scale_by(4.0)).sqrt();
    let l1 = (t + sq).scale_by(0.5);
    let l2 = (t - sq).scale_by(0.5);

    let scale = m.fro_norm();
    let tol = EIGEN_DEGENERACY_TOL * mixed(scale);
    let half_trace = t.scale_by(0.5);
    let scalar_defect = (*m - Mat2::scalar(half_trace)).fro_norm();

    if (l1 - l2).norm() <= tol {
        if scalar_defect <= tol {
            // Scalar multiple of the identity: any basis diagonalizes.
            return Eigen2 {
                values: [half_trace, half_trace],
                vectors: [
                    Vec2::new(c(1.0, 0.0), c(0.0, 0.0)),
                    Vec2::new(c(0.0, 0.0), c(1.0, 0.0)),
                ],
                diagonalizable: true,
            };
        }
        let v = best_eigenvector(m, half_trace, 0);
        return Eigen2 {
            values: [half_trace, half_trace],
            vectors: [v, v],
            diagonalizable: false,
        };
    }

    Eigen2 {
        values: [l1, l2],
        vectors: [best_eigenvector(m, l1, 0), best_eigenvector(m, l2, 1)],
        diagonalizable: true,
    }
}

/// Picks the row-formula eigenvector candidate with the smaller residual;
/// falls back to a basis vector for (near-)scalar matrices.
fn best_eigenvector(m: &Mat2, l: C64, which: usize) -> Vec2 {
    let ca = Vec2::new(m.e[0][1], l - m.e[0][0]);
    let cb = Vec2::new(l - m.e[1][1], m.e[1][0]);
    let fallback = if which == 0 {
        Vec2::new(c(1.0, 0.0), c(0.0, 0.0))
    } else {
        Vec2::new(c(0.0, 0.0), c(1.0, 0.0))
    };
    let mut best = fallback;
    let mut best_res = eig_residual(m, l, &fallback);
    for cand in [ca, cb] {
        if cand.norm() == 0.0 {
            continue;
        }
        let v = cand.normalized();
        let res = eig_residual(m, l, &v);
        if res < best_res {
            best = v;
            best_res = res;
        }
    }
    best.normalized()
}

fn eig_residual(m: &Mat2, l: C64, v: &Vec2) -> f64 {
    let mv = m.apply(v);
    let lv = v.scale(l);
    Vec2::new(mv.x - lv.x, mv.y - lv.y).norm() / v.norm()
}

/// Error from [`pd_sqrt`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PdSqrtError {
    #[error("matrix is not Hermitian positive-definite")]
    NotPositiveDefinite,
}

/// Hermiticity defect tolerance admitted by [`pd_sqrt`], scaled by
/// `mixed(norm)`.
pub const PD_HERMITICITY_TOL: f64 = 1e-12;

/// Principal square root of a Hermitian positive-definite 2x2 matrix:
/// S = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
pub fn pd_sqrt(m: &Mat2) -> Result<Mat2, PdSqrtError> {
    if !m.is_finite() || m.herm_defect() > PD_HERMITICITY_TOL * mixed(m.fro_norm()) {
        return Err(PdSqrtError::NotPositiveDefinite);
    }
    let tr = m.trace().re;
    let det = m.det().re;
    if !(tr > 0.0 && det > 0.0) {
        return Err(PdSqrtError::NotPositiveDefinite);
    }
    let s = det.sqrt();
    let denom = (tr + 2.0 * s).sqrt();
    Ok((*m + Mat2::scalar(c(s, 0.0))).scale(c(1.0 / denom, 0.0)))
}

trait ScaleBy {
    fn scale_by(self, f: f64) -> Self;
}

impl ScaleBy for C64 {
    #[inline]
    fn scale_by(self, f: f64) -> C64 {
        C64::new(self.re * f, self.im * f)
    }
}
