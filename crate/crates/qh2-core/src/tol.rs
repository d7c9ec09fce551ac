//! Named tolerances shared across the crate. Structural checks scale by
//! `mixed(s) = max(1, s)` so they behave absolutely near the unit scale and
//! relatively for large operators.

/// Default validation tolerance for trace reality, discriminant reality and
/// eigenvalue reality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Half-angle product identity and other exact algebraic identities.
pub const IDENTITY_ABS_TOL: f64 = 1e-12;

/// Hermiticity, positivity and intertwining checks on constructed metrics.
pub const METRIC_REL_TOL: f64 = 1e-10;

/// Reality-constraint residuals on constructed observables.
pub const OBSERVABLE_ABS_TOL: f64 = 1e-10;

/// Pseudo-Hermiticity residual threshold for a-posteriori pair checks.
pub const PSEUDO_HERM_TOL: f64 = 1e-9;

/// Irreducibility threshold on the pair discriminant, scaled by the fourth
/// power of the larger traceless-part norm.
pub const IRREDUCIBILITY_TOL: f64 = 1e-9;

/// Relative accuracy required of the recovered family parameter u.
pub const RECOVERY_REL_TOL: f64 = 1e-9;

/// Agreement tolerance between closed forms and the row-reduction oracle.
pub const ORACLE_TOL: f64 = 1e-8;

/// Case threshold: |lambda| below this multiple of the family scale selects
/// the decoupled constraint branch.
pub const CASE_SPLIT_TOL: f64 = 1e-10;
