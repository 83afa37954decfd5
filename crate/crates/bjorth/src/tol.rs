//! Numeric tolerances used across the crate.
//!
//! One scalar tolerance (`EPS`) covers all comparisons unless an operation
//! needs something tighter; it is applied relative to a natural scale where
//! one exists and absolutely otherwise.

/// Scalar comparison tolerance. Support-set membership, active-set detection,
/// differentiability tests, and orthogonality tests all use this, relative to
/// the magnitude of the quantity compared.
pub const EPS: f64 = 1e-9;

/// Absolute endpoint tolerance for the orthogonality-interval bisection.
pub const BISECT_TOL: f64 = 1e-10;

/// Maximum doublings when bracketing the orthogonality interval. Exhausting
/// it signals a norm-family bug, not a legal input.
pub const MAX_BRACKET_DOUBLINGS: u32 = 200;

/// Absolute tolerance for the adaptive Simpson accumulation in norm
/// reconstruction.
pub const QUAD_TOL: f64 = 1e-10;

/// Recursion depth cap for adaptive Simpson.
pub const QUAD_MAX_DEPTH: u32 = 40;

/// Relative nudge applied to a quadrature node that lands on a nonsmooth
/// point of the pencil. The nonsmooth set has measure zero, so the integral
/// is unaffected; the nudge keeps evaluation deterministic.
pub const NONSMOOTH_NUDGE: f64 = 1e-12;

/// Pole guard for the reconstruction integrand `1 / (t + f(t))`.
pub const POLE_EPS: f64 = 1e-12;

/// Relative spread below which sampled norm ratios `‖Tx‖/‖x‖` count as
/// constant, i.e. the operator as a scaled isometry.
pub const RATIO_SPREAD_TOL: f64 = 1e-8;

/// Consecutive rejections the orthogonal-pair sampler tolerates before
/// giving up.
pub const REJECTION_BUDGET: u32 = 1000;
