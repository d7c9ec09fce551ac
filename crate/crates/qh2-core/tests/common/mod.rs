//! Shared draw helpers for the randomized suites. Everything is seeded, so
//! failures reproduce exactly.

use qh2_core::mat2::{c64, Mat2, C64};
use qh2_core::quasi::AngleForm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over (0, hi]: the open lower endpoint keeps scale parameters
/// strictly positive.
pub fn positive(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    hi * (1.0 - rng.random::<f64>())
}

pub fn complex_box(rng: &mut ChaCha8Rng, half_width: f64) -> C64 {
    c64(
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
    )
}

/// Angle form with Re theta in the open interior of (0, pi) and bounded
/// imaginary parts.
pub fn draw_angle(rng: &mut ChaCha8Rng) -> AngleForm {
    let theta = c64(rng.random_range(0.02..PI - 0.02), rng.random_range(-2.0..=2.0));
    let phi = c64(rng.random_range(0.01..TAU - 0.01), rng.random_range(-1.5..=1.5));
    let gap = 0.1 + positive(rng, 4.9);
    let q = rng.random_range(-2.0..=2.0);
    AngleForm::new(q, gap, theta, phi).expect("drawn parameters are in domain")
}

/// Angle form with real theta, where u = 1 makes the metric diagonal.
pub fn draw_angle_real(rng: &mut ChaCha8Rng) -> AngleForm {
    let theta = c64(rng.random_range(0.02..PI - 0.02), 0.0);
    let phi = c64(rng.random_range(0.01..TAU - 0.01), rng.random_range(-1.5..=1.5));
    let gap = 0.1 + positive(rng, 4.9);
    let q = rng.random_range(-2.0..=2.0);
    AngleForm::new(q, gap, theta, phi).expect("drawn parameters are in domain")
}

/// Angle form of an exactly diagonal operator (theta = 0 or pi).
pub fn draw_angle_diagonal(rng: &mut ChaCha8Rng) -> AngleForm {
    let theta = c64(if rng.random::<bool>() { 0.0 } else { PI }, 0.0);
    let gap = 0.1 + positive(rng, 4.9);
    let q = rng.random_range(-2.0..=2.0);
    AngleForm::new(q, gap, theta, c64(0.0, 0.0)).expect("drawn parameters are in domain")
}

/// A random matrix with entries in a box, with no validity guarantees.
pub fn draw_raw(rng: &mut ChaCha8Rng, half_width: f64) -> Mat2 {
    Mat2::new(
        complex_box(rng, half_width),
        complex_box(rng, half_width),
        complex_box(rng, half_width),
        complex_box(rng, half_width),
    )
}
