//! Quasi-Hermitian two-level operators: validation, angle parametrization,
//! metric operator families, compatible observables, irreducibility tests,
//! metric recovery from operator pairs, and hermitization.
//!
//! A matrix H acting on C^2 is treated here as q I + H0 with H0 traceless.
//! When H has a real trace, a real non-negative discriminant and is
//! diagonalizable, it admits positive-definite metrics eta with
//! H^dagger eta = eta H. This crate constructs the full two-parameter family
//! of such metrics in closed form, characterizes every observable compatible
//! with a given metric, decides whether a pair of operators fixes the metric
//! up to scale, and recovers that metric when it does.
//!
//! All closed-form constructions are cross-checked against an independent
//! brute-force route ([`oracle`]) that row-reduces the intertwining
//! constraints directly.

pub mod linsys;
pub mod mat2;
pub mod metric;
pub mod observables;
pub mod oracle;
pub mod quasi;
pub mod tol;

pub use mat2::{c64, commutator, eigen2, pd_sqrt, Eigen2, Mat2, PdSqrtError, Vec2, C64};
pub use metric::{
    check_pseudo_hermitian, dual_basis_family, metric_coefficients, metric_family, metric_for,
    pseudo_hermitian_residual, FamilyChart, InvalidMetricParams, MetricCoefficients, MetricFamily,
    MetricParams,
};
pub use observables::{
    compatibility_margin, constraint_data, construct_compatible, hermitize, irreducibility,
    irreducibility_raw,
    metric_from_pair, sample_compatible, CaseMismatch, ConstraintData, Hermitized,
    HermitizeError, IrreducibilityReport, MetricCase, ObservableParams, ObservableSpec,
    PairMetric, PairMetricError,
};
pub use quasi::{
    traceless_discriminant, validate_quasi_hermitian, AngleForm, AngleFormError,
    QuasiHermitianOp, RejectReason,
};
