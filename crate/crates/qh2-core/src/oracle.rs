//! Brute-force intertwiner analysis, independent of every closed-form
//! construction in this crate: a Hermitian eta is vectorized over R^4 and
//! the constraint O^dagger eta = eta O is row-reduced directly. The kernel
//! dimension, kernel basis, and positive-definite representatives computed
//! here are used to cross-check the analytic metric machinery.

use crate::linsys::{solve_real_linear, RealLinearSystem};
use crate::mat2::{c, mixed, Mat2};

/// Hermitian coordinate basis matching the vectorization
/// (Re eta00, Re eta11, Re eta01, Im eta01).
pub fn herm_basis() -> [Mat2; 4] {
    [
        Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
        Mat2::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
        Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        Mat2::new(c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)),
    ]
}

/// Hermitian matrix from its real coordinates.
pub fn herm_from_coords(x: &[f64]) -> Mat2 {
    assert_eq!(x.len(), 4);
    Mat2::new(
        c(x[0], 0.0),
        c(x[2], x[3]),
        c(x[2], -x[3]),
        c(x[1], 0.0),
    )
}

/// Real coordinates of a (presumed Hermitian) matrix.
pub fn herm_to_coords(m: &Mat2) -> [f64; 4] {
    [m.e[0][0].re, m.e[1][1].re, m.e[0][1].re, m.e[0][1].im]
}

/// Result of row-reducing the stacked intertwining constraints.
#[derive(Clone, Debug)]
pub struct IntertwinerSolution {
    /// Rank of the stacked real system (8 rows per operator).
    pub rank: usize,
    /// Unit-Frobenius Hermitian basis of the solution space.
    pub kernel: Vec<Mat2>,
}

impl IntertwinerSolution {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Eight real rows expressing O^dagger eta - eta O = 0 over the coordinates
/// of eta.
fn intertwiner_rows(op: &Mat2) -> Vec<Vec<f64>> {
    let basis = herm_basis();
    let images: Vec<Mat2> = basis
        .iter()
        .map(|b| op.adjoint() * *b - *b * *op)
        .collect();
    let mut rows = Vec::with_capacity(8);
    for p in 0..2 {
        for q in 0..2 {
            let re_row = images.iter().map(|k| k.e[p][q].re).collect();
            let im_row = images.iter().map(|k| k.e[p][q].im).collect();
            rows.push(re_row);
            rows.push(im_row);
        }
    }
    rows
}

/// Solves the joint intertwiner system for every operator in `ops`.
pub fn intertwiner_space(ops: &[Mat2]) -> IntertwinerSolution {
    assert!(!ops.is_empty(), "at least one operator required");
    let mut rows = Vec::with_capacity(8 * ops.len());
    for op in ops {
        rows.extend(intertwiner_rows(op));
    }
    let sol = solve_real_linear(&RealLinearSystem::homogeneous(rows))
        .expect("homogeneous system is always consistent");
    let kernel = sol
        .kernel
        .iter()
        .map(|v| {
            let m = herm_from_coords(v);
            m.scale(c(1.0 / m.fro_norm(), 0.0))
        })
        .collect();
    IntertwinerSolution { rank: sol.rank, kernel }
}

/// Strictness floor for positive-definiteness of unit-norm candidates.
const PD_FLOOR: f64 = 1e-12;

fn is_pd(m: &Mat2) -> bool {
    let n2 = m.fro_norm() * m.fro_norm();
    m.trace().re > PD_FLOOR * mixed(n2).sqrt() && m.det().re > PD_FLOOR * n2
}

/// Searches the kernel span for a positive-definite element and returns a
/// unit-Frobenius representative, or `None` when the cone is empty.
pub fn pd_representative(kernel: &[Mat2]) -> Option<Mat2> {
    match kernel.len() {
        0 => None,
        1 => pd_from_single(&kernel[0]),
        2 => pd_from_pair(&kernel[0], &kernel[1]),
        _ => {
            for b in kernel {
                if let Some(m) = pd_from_single(b) {
                    return Some(m);
                }
            }
            for i in 0..kernel.len() {
                for j in (i + 1)..kernel.len() {
                    if let Some(m) = pd_from_pair(&kernel[i], &kernel[j]) {
                        return Some(m);
                    }
                }
            }
            // Span of dimension >= 3 over Hermitian 2x2: the identity's
            // projection onto the span is PD whenever the cone is non-empty
            // around it; for the full 4-dimensional kernel it is exact.
            let proj = project_onto_span(&Mat2::identity(), kernel);
            let resid = (proj - Mat2::identity()).fro_norm();
            if resid <= 1e-9 && is_pd(&proj) {
                return Some(proj.scale(c(1.0 / proj.fro_norm(), 0.0)));
            }
            None
        }
    }
}

fn pd_from_single(b: &Mat2) -> Option<Mat2> {
    let t = b.trace().re;
    let sigma = if t > 0.0 { 1.0 } else { -1.0 };
    let candidate = b.scale(c(sigma, 0.0));
    is_pd(&candidate).then_some(candidate)
}

/// Analytic search of the two-dimensional span sigma (P + t Q): the
/// determinant is a quadratic in the mixing parameter t and positivity of
/// the trace is linear, so the PD cone projects to explicit t-intervals.
fn pd_from_pair(b1: &Mat2, b2: &Mat2) -> Option<Mat2> {
    for (p, q) in [(b1, b2), (b2, b1)] {
        for sigma in [1.0, -1.0] {
            let c0 = p.det().re;
            let c2 = q.det().re;
            let c1 = (*p + *q).det().re - c0 - c2;
            let det_windows = quadratic_positive_windows(c2, c1, c0);
            let tp = sigma * p.trace().re;
            let tq = sigma * q.trace().re;
            for (lo, hi) in det_windows {
                if let Some(t) = pick_point(lo, hi, tp, tq) {
                    let m = (*p + q.scale(c(t, 0.0))).scale(c(sigma, 0.0));
                    if is_pd(&m) {
                        return Some(m.scale(c(1.0 / m.fro_norm(), 0.0)));
                    }
                }
            }
        }
    }
    None
}

/// Open intervals where c2 t^2 + c1 t + c0 > 0.
fn quadratic_positive_windows(c2: f64, c1: f64, c0: f64) -> Vec<(f64, f64)> {
    let eps = 1e-12;
    if c2.abs() <= eps {
        if c1.abs() <= eps {
            return if c0 > eps {
                vec![(f64::NEG_INFINITY, f64::INFINITY)]
            } else {
                vec![]
            };
        }
        let root = -c0 / c1;
        return if c1 > 0.0 {
            vec![(root, f64::INFINITY)]
        } else {
            vec![(f64::NEG_INFINITY, root)]
        };
    }
    let disc = c1 * c1 - 4.0 * c0 * c2;
    if disc <= 0.0 {
        return if c2 > 0.0 {
            vec![(f64::NEG_INFINITY, f64::INFINITY)]
        } else {
            vec![]
        };
    }
    let sq = disc.sqrt();
    let r1 = (-c1 - sq) / (2.0 * c2);
    let r2 = (-c1 + sq) / (2.0 * c2);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if c2 > 0.0 {
        vec![(f64::NEG_INFINITY, lo), (hi, f64::INFINITY)]
    } else {
        vec![(lo, hi)]
    }
}

/// Interior point of (lo, hi) intersected with {t : tp + t tq > 0}, if any.
fn pick_point(lo: f64, hi: f64, tp: f64, tq: f64) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let eps = 1e-12;
    if tq.abs() <= eps {
        if tp <= eps {
            return None;
        }
    } else {
        let bound = -tp / tq;
        if tq > 0.0 {
            lo = lo.max(bound);
        } else {
            hi = hi.min(bound);
        }
    }
    if lo >= hi {
        return None;
    }
    let t = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0 + lo.abs() * 0.5,
        (false, true) => hi - 1.0 - hi.abs() * 0.5,
        (false, false) => 0.0,
    };
    (t > lo && t < hi).then_some(t)
}

/// Orthogonal projection of `m` onto the real span of `basis` under the
/// Frobenius inner product of the Hermitian coordinates.
pub fn project_onto_span(m: &Mat2, basis: &[Mat2]) -> Mat2 {
    let target = herm_to_coords(m);
    let coords: Vec<[f64; 4]> = basis.iter().map(herm_to_coords).collect();
    // Gram-Schmidt with the coordinate weights matching the Frobenius norm:
    // off-diagonal coordinates count twice.
    let ip = |a: &[f64; 4], b: &[f64; 4]| {
        a[0] * b[0] + a[1] * b[1] + 2.0 * (a[2] * b[2] + a[3] * b[3])
    };
    let mut ortho: Vec<[f64; 4]> = Vec::new();
    for v in coords {
        let mut w = v;
        for o in &ortho {
            let f = ip(&w, o);
            for i in 0..4 {
                w[i] -= f * o[i];
            }
        }
        let n = ip(&w, &w).sqrt();
        if n > 1e-13 {
            for x in &mut w {
                *x /= n;
            }
            ortho.push(w);
        }
    }
    let mut out = [0.0; 4];
    for o in &ortho {
        let f = ip(&target, o);
        for i in 0..4 {
            out[i] += f * o[i];
        }
    }
    herm_from_coords(&out)
}

/// Frobenius distance from `m` to the real span of `basis`.
pub fn span_deviation(m: &Mat2, basis: &[Mat2]) -> f64 {
    (project_onto_span(m, basis) - *m).fro_norm()
}

/// Relative intertwining residual ||O^dagger eta - eta O|| scaled by norms.
pub fn intertwining_residual(op: &Mat2, eta: &Mat2) -> f64 {
    let raw = (op.adjoint() * *eta - *eta * *op).fro_norm();
    raw / (mixed(op.fro_norm()) * mixed(eta.fro_norm()))
}
