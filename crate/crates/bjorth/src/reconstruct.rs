//! Norm reconstruction outside the orthogonality segment.
//!
//! For `α > M` the norm along a pencil satisfies
//!
//! `‖x + αy‖ = ‖x + My‖ · exp(∫_M^α (t + f(t))⁻¹ dt)`
//!
//! and the mirrored identity with base point `m` holds for `α < m`, so the
//! companion function determines the norm on the whole line from its value
//! on the flat segment. The integrand equals `d/dt ln ‖x + ty‖`, and is
//! evaluated here in the cancellation-free form `x*(y) / ‖x + ty‖`, which
//! follows from `x*(x + ty) = ‖x + ty‖`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pencil::LinePencil;
use crate::quad::adaptive_simpson;
use crate::tol::{BISECT_TOL, POLE_EPS, QUAD_MAX_DEPTH, QUAD_TOL};

/// A reconstructed norm value compared against direct evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionResult {
    pub alpha: f64,
    /// `‖x + αy‖` via the exponentiated integral.
    pub reconstructed: f64,
    /// `‖x + αy‖` evaluated directly.
    pub direct: f64,
    /// `|reconstructed − direct| / direct`.
    pub rel_error: f64,
    /// Integrand evaluations spent by the quadrature.
    pub nodes_used: u32,
}

/// `d/dt ln ‖x + ty‖ = (t + f(t))⁻¹`, computed as `x*(y) / ‖x + ty‖`.
/// Nonsmooth `t` are resolved by the pencil's branch selection. Defined
/// for `t` strictly outside the orthogonality segment.
pub fn log_norm_derivative(pencil: &LinePencil, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { context: "t" });
    }
    let interval = pencil.interval()?;
    let margin = 10.0 * BISECT_TOL;
    if t >= interval.lo - margin && t <= interval.hi + margin {
        return Err(Error::AlphaInsideInterval {
            alpha: t,
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    integrand(pencil, t)
}

/// The same quantity without the interval guard, for quadrature nodes that
/// are inside the integration range by construction (the base endpoint sits
/// on the segment boundary, where the value degenerates to 0 or to the
/// one-sided slope; both are correct as endpoint values of the integral).
fn integrand(pencil: &LinePencil, t: f64) -> Result<f64> {
    let pairing = pencil.branch_pairing(t)?;
    let norm = pencil.norm_at(t);
    // `t + f(t) = ‖x + ty‖ / x*(y)`; magnitudes of order 1e−12 cannot arise
    // from a support functional of a norm bounded below on the pencil, so
    // hitting this signals a defect upstream.
    if pairing.abs() * POLE_EPS >= norm {
        return Err(Error::IntegrandPole {
            t,
            value: norm / pairing,
        });
    }
    Ok(pairing / norm)
}

/// Reconstructs `‖x + αy‖` for `α` strictly outside the orthogonality
/// segment `[m, M]` and compares it against direct evaluation.
pub fn reconstruct_norm(pencil: &LinePencil, alpha: f64) -> Result<ReconstructionResult> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite { context: "alpha" });
    }
    let interval = pencil.interval()?;
    let margin = 10.0 * BISECT_TOL;
    if alpha >= interval.lo - margin && alpha <= interval.hi + margin {
        return Err(Error::AlphaInsideInterval {
            alpha,
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    let base = if alpha > interval.hi {
        interval.hi
    } else {
        interval.lo
    };
    let quad = adaptive_simpson(
        |t| integrand(pencil, t),
        base,
        alpha,
        QUAD_TOL,
        QUAD_MAX_DEPTH,
    )?;
    let reconstructed = interval.min_value * quad.value.exp();
    let direct = pencil.norm_at(alpha);
    let rel_error = (reconstructed - direct).abs() / direct;
    Ok(ReconstructionResult {
        alpha,
        reconstructed,
        direct,
        rel_error,
        nodes_used: quad.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{NormSpec, Vector};
    use approx::assert_relative_eq;

    fn pencil(space: NormSpec, x: &[f64], y: &[f64]) -> LinePencil {
        LinePencil::new(
            space,
            Vector::from_slice(x).unwrap(),
            Vector::from_slice(y).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sup_norm_reconstruction_is_linear_above_segment() {
        // φ(t) = max(1, |t|): base value 1 at M = 1, then ∫₁³ dt/t = ln 3.
        let p = pencil(NormSpec::linf(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        let r = reconstruct_norm(&p, 3.0).unwrap();
        assert_relative_eq!(r.reconstructed, 3.0, max_relative = 1e-9);
        assert_relative_eq!(r.direct, 3.0, max_relative = 1e-12);
        assert!(r.rel_error <= 1e-9);
        assert!(r.nodes_used >= 3);
    }

    #[test]
    fn euclidean_reconstruction_both_sides() {
        // φ(t) = √(1+t²): ∫₀¹ t/(1+t²) dt = ½ ln 2 gives √2 at α = 1; the
        // left branch at α = −2 gives √5.
        let p = pencil(NormSpec::l2(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        let r = reconstruct_norm(&p, 1.0).unwrap();
        assert_relative_eq!(r.reconstructed, 2.0f64.sqrt(), max_relative = 1e-9);
        assert!(r.rel_error <= 1e-9);
        let r = reconstruct_norm(&p, -2.0).unwrap();
        assert_relative_eq!(r.reconstructed, 5.0f64.sqrt(), max_relative = 1e-9);
        assert!(r.rel_error <= 1e-9);
    }

    #[test]
    fn polyhedral_reconstruction_handles_piecewise_companion() {
        let gens = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let p = pencil(
            NormSpec::polyhedral(2, gens).unwrap(),
            &[1.0, 0.0],
            &[0.0, 1.0],
        );
        // φ(t) = max(1, |t|, |1+t|) = 1 + t for t > 0 and −t for t < −1.
        let r = reconstruct_norm(&p, 2.0).unwrap();
        assert_relative_eq!(r.reconstructed, 3.0, max_relative = 1e-8);
        let r = reconstruct_norm(&p, -4.0).unwrap();
        assert_relative_eq!(r.reconstructed, 4.0, max_relative = 1e-8);
    }

    #[test]
    fn l1_reconstruction_crosses_kinks() {
        // φ(t) = |1+t| + |t| has kinks at 0 and −1; above M = 0 the slope
        // jumps to 2 and φ(t) = 1 + 2t.
        let p = pencil(NormSpec::l1(2).unwrap(), &[1.0, 0.0], &[1.0, 1.0]);
        let r = reconstruct_norm(&p, 2.5).unwrap();
        assert_relative_eq!(r.reconstructed, 6.0, max_relative = 1e-8);
        let r = reconstruct_norm(&p, -3.0).unwrap();
        assert_relative_eq!(r.reconstructed, 5.0, max_relative = 1e-8);
    }

    #[test]
    fn rejects_alpha_on_the_flat_segment() {
        let p = pencil(NormSpec::l2(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        assert!(matches!(
            reconstruct_norm(&p, 0.0),
            Err(Error::AlphaInsideInterval { .. })
        ));
        let p = pencil(NormSpec::linf(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        assert!(matches!(
            reconstruct_norm(&p, 0.999_999_999_9),
            Err(Error::AlphaInsideInterval { .. })
        ));
    }

    #[test]
    fn log_derivative_closed_forms() {
        let p = pencil(NormSpec::linf(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        assert_relative_eq!(log_norm_derivative(&p, 2.0).unwrap(), 0.5, epsilon = 1e-9);
        let p = pencil(NormSpec::l2(2).unwrap(), &[1.0, 0.0], &[0.0, 1.0]);
        assert_relative_eq!(log_norm_derivative(&p, 1.0).unwrap(), 0.5, epsilon = 1e-9);
        assert!(matches!(
            log_norm_derivative(&p, 0.0),
            Err(Error::AlphaInsideInterval { .. })
        ));
    }

    #[test]
    fn log_derivative_matches_central_difference() {
        let p = pencil(
            NormSpec::lp(3, crate::space::Exponent::Finite(3.0)).unwrap(),
            &[1.0, -2.0, 0.5],
            &[0.5, 1.0, -1.0],
        );
        let iv = p.interval().unwrap();
        let h = 1e-6;
        for t in [iv.hi + 0.5, iv.hi + 2.0, iv.lo - 1.0] {
            let fd = (p.norm_at(t + h).ln() - p.norm_at(t - h).ln()) / (2.0 * h);
            assert_relative_eq!(log_norm_derivative(&p, t).unwrap(), fd, epsilon = 1e-4);
        }
    }
}
