//! Birkhoff-James orthogonality structure in finite-dimensional real normed
//! spaces.
//!
//! A vector `x` is orthogonal to `y` (written `x ⊥ y`) when
//! `‖x + αy‖ ≥ ‖x‖` for every real `α`. In an inner-product space this is
//! ordinary perpendicularity; in a general normed space it is an asymmetric
//! relation governed by the support functionals of the norm. This crate makes
//! that structure computable for three exactly-representable norm families on
//! ℝⁿ (ℓp, weighted ℓp, and polyhedral norms):
//!
//! - [`space`]: norm evaluation, dual norms, and exact support-functional
//!   sets `S(x) = {f : ‖f‖* = 1, f(x) = ‖x‖}`.
//! - [`pencil`]: the convex function `α ↦ ‖x + αy‖` along a line: one-sided
//!   derivatives, the orthogonality interval `[m, M]` of parameters with
//!   `x + αy ⊥ y`, and the companion function `f(α)` with
//!   `x + αy ⊥ x − f(α)y`.
//! - [`reconstruct`]: recovery of `‖x + αy‖` outside `[m, M]` from the
//!   companion function alone, via an exponentiated integral.
//! - [`operator`]: empirical classification of linear operators: does `T`
//!   preserve orthogonality, and is it a scalar multiple of an isometry?
//!   The two properties are equivalent, and the suite cross-checks them.
//! - [`report`]: serializable reports for the `bjorth` CLI.
//!
//! All computations are deterministic; sampling is driven by explicit seeds.
//! Values are immutable after construction and safe to share across threads.

pub mod corpus;
pub mod error;
mod numeric;
pub mod operator;
pub mod pencil;
pub mod quad;
pub mod reconstruct;
pub mod report;
pub mod space;
pub mod tol;

pub use error::{Error, ErrorClass, Result};
pub use operator::{
    interval_equality_check, is_scaled_isometry, orthogonal_pair_sampler, preserves_orthogonality,
    theorem_suite, IntervalEqualityReport, LinearOperator, OperatorVerdict, Preservation,
    PreservationCheck, SamplerConfig, ScaledIsometry,
};
pub use pencil::{is_orthogonal, CompanionSample, CompanionStatus, LinePencil, OrthoInterval};
pub use reconstruct::{log_norm_derivative, reconstruct_norm, ReconstructionResult};
pub use space::{Exponent, Functional, NormSpec, SupportSet, Vector};
