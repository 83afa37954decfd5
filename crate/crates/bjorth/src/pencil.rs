//! Birkhoff-James orthogonality along a line pencil `α ↦ x + αy`.
//!
//! `x ⊥ y` means `‖x + αy‖ ≥ ‖x‖` for every `α`, equivalently some support
//! functional of `x` kills `y`. For linearly independent `x, y` the map
//! `φ(α) = ‖x + αy‖` is convex and coercive, its one-sided derivatives are
//! the extreme values of `x*(y)` over the support set of `x + αy`, and the
//! set `{α : x + αy ⊥ y}` is exactly the segment `[m, M]` on which `φ`
//! attains its minimum. This module locates that segment by bisection on
//! the one-sided derivatives and evaluates the companion function
//!
//! `f(α) = x*(x) / x*(y) = φ(α)/x*(y) − α`
//!
//! at differentiable points outside it; the second form holds because
//! every support functional satisfies `x*(x + αy) = φ(α)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::space::{NormSpec, Vector};
use crate::tol::{BISECT_TOL, EPS, MAX_BRACKET_DOUBLINGS, NONSMOOTH_NUDGE};

/// Whether `x ⊥ y` in the Birkhoff-James sense: some support functional of
/// `x` satisfies `x*(y) = 0`, i.e. `0` lies in the pairing range of the
/// support set. `x` must be nonzero; `y` may be anything, including `0`
/// (always orthogonal) or a multiple of `x` (never, unless zero).
pub fn is_orthogonal(space: &NormSpec, x: &Vector, y: &Vector) -> Result<bool> {
    space.norm(x)?;
    let y_norm = space.norm(y)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (lo, hi) = space.support_set(x)?.pairing_range(y)?;
    let tol = EPS * y_norm;
    Ok(lo <= tol && hi >= -tol)
}

/// The segment `{α : x + αy ⊥ y}`, which is the argmin segment of
/// `φ(α) = ‖x + αy‖`. Both endpoints are certified from the inside: the
/// relevant one-sided derivative condition was verified to hold at the
/// reported values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoInterval {
    pub lo: f64,
    pub hi: f64,
    /// The constant value of `φ` on the segment.
    pub min_value: f64,
}

impl OrthoInterval {
    pub fn contains(&self, alpha: f64) -> bool {
        self.lo <= alpha && alpha <= self.hi
    }
}

/// Outcome of evaluating the companion function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CompanionStatus {
    /// `x*(y) = 0` for the support functional, i.e. `x + αy ⊥ y`; this is
    /// exactly the case `α ∈ [m, M]`, where `f` is undefined.
    OrthogonalToY,
    /// `φ` is differentiable at `α` and `f(α) = x*(x)/x*(y)` is the unique
    /// number with `x + αy ⊥ x − f(α)·y`.
    Value { f_alpha: f64 },
    /// The one-sided derivatives of `φ` disagree at `α`; no canonical
    /// companion value is selected.
    NotDifferentiable,
}

/// One evaluation of the companion function `f(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompanionSample {
    pub alpha: f64,
    #[serde(flatten)]
    pub status: CompanionStatus,
}

/// The line `α ↦ x + αy` through linearly independent `x, y` in a fixed
/// normed space. Independence keeps every point of the pencil nonzero, so
/// support sets exist along the whole line.
#[derive(Debug, Clone)]
pub struct LinePencil {
    space: NormSpec,
    x: Vector,
    y: Vector,
    y_norm: f64,
}

impl LinePencil {
    pub fn new(space: NormSpec, x: Vector, y: Vector) -> Result<Self> {
        space.norm(&x)?;
        let y_norm = space.norm(&y)?;
        if numeric::residual_ratio(x.coords(), y.coords()) <= EPS {
            return Err(Error::DependentPencil);
        }
        Ok(LinePencil { space, x, y, y_norm })
    }

    pub fn space(&self) -> &NormSpec {
        &self.space
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    /// The point `x + αy`.
    pub fn point_at(&self, alpha: f64) -> Vector {
        self.x.axpy(alpha, &self.y)
    }

    /// `φ(α) = ‖x + αy‖`.
    pub fn norm_at(&self, alpha: f64) -> f64 {
        self.space
            .norm(&self.point_at(alpha))
            .expect("pencil dimensions are validated at construction")
    }

    /// Extreme values of `x*(y)` over the support set of `x + αy`. These
    /// are the one-sided derivatives of `φ` at `α`: `(D⁻φ, D⁺φ)`.
    fn pairing_range_at(&self, alpha: f64) -> Result<(f64, f64)> {
        self.space
            .support_set(&self.point_at(alpha))?
            .pairing_range(&self.y)
    }

    /// Right derivative `D⁺φ(α) = max {x*(y) : x* ∈ S(x + αy)}`.
    pub fn right_derivative(&self, alpha: f64) -> Result<f64> {
        Ok(self.pairing_range_at(alpha)?.1)
    }

    /// Left derivative `D⁻φ(α) = min {x*(y) : x* ∈ S(x + αy)}`.
    pub fn left_derivative(&self, alpha: f64) -> Result<f64> {
        Ok(self.pairing_range_at(alpha)?.0)
    }

    /// Whether the one-sided derivatives of `φ` agree at `α`, within
    /// `1e-9 · max(1, φ(α))`.
    pub fn is_differentiable_at(&self, alpha: f64) -> Result<bool> {
        let (lo, hi) = self.pairing_range_at(alpha)?;
        Ok(hi - lo <= EPS * self.norm_at(alpha).max(1.0))
    }

    /// Boundary point of a predicate that is true exactly on a half-line
    /// `[c, ∞)`, reported as a certified-true value within `BISECT_TOL`
    /// of `c`.
    fn halfline_boundary<P>(&self, pred: P) -> Result<f64>
    where
        P: Fn(f64) -> Result<bool>,
    {
        let mut lo;
        let mut hi;
        let mut doublings = 0u32;
        if pred(0.0)? {
            hi = 0.0;
            let mut t = -1.0;
            loop {
                if !pred(t)? {
                    lo = t;
                    break;
                }
                hi = t;
                doublings += 1;
                if doublings > MAX_BRACKET_DOUBLINGS {
                    return Err(Error::BracketingFailed { doublings });
                }
                t *= 2.0;
            }
        } else {
            lo = 0.0;
            let mut t = 1.0;
            loop {
                if pred(t)? {
                    hi = t;
                    break;
                }
                lo = t;
                doublings += 1;
                if doublings > MAX_BRACKET_DOUBLINGS {
                    return Err(Error::BracketingFailed { doublings });
                }
                t *= 2.0;
            }
        }
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if pred(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// The orthogonality segment `[m, M] = argmin φ`.
    ///
    /// `m` is the boundary of `{α : D⁺φ(α) ≥ 0}` and `M` the boundary of
    /// `{α : D⁻φ(α) ≤ 0}` (the latter located through the reflection
    /// `α ↦ −α` so the certified side is again the inside). If rounding
    /// leaves the two certified endpoints inverted, both collapse to
    /// their midpoint.
    pub fn interval(&self) -> Result<OrthoInterval> {
        let lo = self.halfline_boundary(|a| Ok(self.pairing_range_at(a)?.1 >= 0.0))?;
        let hi = -self.halfline_boundary(|a| Ok(self.pairing_range_at(-a)?.0 <= 0.0))?;
        let (lo, hi) = if lo > hi {
            let mid = 0.5 * (lo + hi);
            (mid, mid)
        } else {
            (lo, hi)
        };
        let min_value = self.norm_at(0.5 * (lo + hi));
        Ok(OrthoInterval { lo, hi, min_value })
    }

    /// The support-functional pairing `x*(y)` at `t`, for use inside
    /// integrands: the unique value at smooth points, the nudged value when
    /// a relative 1e-12 shift clears a kink, and otherwise the
    /// right-derivative branch.
    pub(crate) fn branch_pairing(&self, t: f64) -> Result<f64> {
        let tol = EPS * self.y_norm;
        let (lo, hi) = self.pairing_range_at(t)?;
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let nudged = t + NONSMOOTH_NUDGE * t.abs().max(1.0);
        let (lo2, hi2) = self.pairing_range_at(nudged)?;
        if hi2 - lo2 <= tol {
            return Ok(0.5 * (lo2 + hi2));
        }
        Ok(hi)
    }

    /// The companion function `f(α) = x*(x)/x*(y)`, evaluated through any
    /// support functional `x*` of `x + αy` (the choice does not matter at
    /// differentiable points). The `Value` case satisfies
    /// `x + αy ⊥ x − f(α)·y`; a vanishing denominator means `x + αy ⊥ y`,
    /// i.e. `α` lies in the orthogonality segment.
    pub fn companion_at(&self, alpha: f64) -> Result<CompanionSample> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite { context: "alpha" });
        }
        let (lo, hi) = self.pairing_range_at(alpha)?;
        let phi = self.norm_at(alpha);
        if hi - lo > EPS * phi.max(1.0) {
            return Ok(CompanionSample {
                alpha,
                status: CompanionStatus::NotDifferentiable,
            });
        }
        // x*(y) is the shared pairing; x*(x) = x*(x + αy) − α·x*(y) = φ(α) − α·x*(y).
        let pairing = 0.5 * (lo + hi);
        let numerator = phi - alpha * pairing;
        if pairing.abs() <= EPS * numerator.abs().max(1.0) {
            return Ok(CompanionSample {
                alpha,
                status: CompanionStatus::OrthogonalToY,
            });
        }
        Ok(CompanionSample {
            alpha,
            status: CompanionStatus::Value {
                f_alpha: numerator / pairing,
            },
        })
    }
}
