//! Random operator corpus for exercising the theorem suite: orthogonal
//! matrices (Euclidean isometries), signed permutations (isometries of
//! every `Lp` norm), and perturbations `T(I + εE)` that break isometry.

use rand::Rng;

use crate::error::Result;
use crate::operator::LinearOperator;

/// A random orthogonal matrix: Gram-Schmidt applied to a matrix with
/// Gaussian entries, redrawing columns that fall too close to the span of
/// the previous ones. Gaussians come from the Box-Muller transform so the
/// corpus only depends on the uniform stream of `rng`.
pub fn random_orthogonal<R: Rng>(rng: &mut R, dim: usize) -> Result<LinearOperator> {
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut candidate: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        for prev in &columns {
            let proj: f64 = candidate.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (c, p) in candidate.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let len = candidate.iter().map(|c| c * c).sum::<f64>().sqrt();
        if len < 1e-6 {
            continue;
        }
        for c in &mut candidate {
            *c /= len;
        }
        columns.push(candidate);
    }
    let matrix = (0..dim)
        .map(|i| (0..dim).map(|j| columns[j][i]).collect())
        .collect();
    LinearOperator::new(matrix)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A random signed permutation matrix: exactly one `±1` per row and
/// column. Isometry of every `Lp` norm.
pub fn signed_permutation<R: Rng>(rng: &mut R, dim: usize) -> Result<LinearOperator> {
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let matrix = (0..dim)
        .map(|i| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            (0..dim)
                .map(|j| if j == perm[i] { sign } else { 0.0 })
                .collect()
        })
        .collect();
    LinearOperator::new(matrix)
}

/// `op · (I + εE)` with `E` drawn entrywise from `[−1, 1]`: a controlled
/// departure from `op` that destroys isometry for generic draws.
pub fn perturbed<R: Rng>(rng: &mut R, op: &LinearOperator, epsilon: f64) -> Result<LinearOperator> {
    let dim = op.dim();
    let bump: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let base = if i == j { 1.0 } else { 0.0 };
                    base + epsilon * rng.gen_range(-1.0..=1.0)
                })
                .collect()
        })
        .collect();
    op.compose(&LinearOperator::new(bump)?)
}

/// `Q · diag(entries) · Qᵀ`: a symmetric operator with prescribed spectrum,
/// anisotropic whenever the entries differ.
pub fn conjugated_diagonal(q: &LinearOperator, entries: &[f64]) -> Result<LinearOperator> {
    q.compose(&LinearOperator::diagonal(entries)?)?
        .compose(&q.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{is_scaled_isometry, SamplerConfig, ScaledIsometry};
    use crate::space::{Exponent, NormSpec, Vector};
    use approx::assert_relative_eq;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_matrices_have_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 2..=5 {
            let q = random_orthogonal(&mut rng, dim).unwrap();
            let m = q.matrix();
            for i in 0..dim {
                for j in 0..dim {
                    let dot: f64 = (0..dim).map(|k| m[k][i] * m[k][j]).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert_relative_eq!(dot, expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn signed_permutations_are_lp_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let op = signed_permutation(&mut rng, 4).unwrap();
        for row in op.matrix() {
            assert_eq!(row.iter().filter(|c| c.abs() == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|&&c| c == 0.0).count(), 3);
        }
        for p in [Exponent::Finite(1.0), Exponent::Finite(3.0), Exponent::Infinity] {
            let spec = NormSpec::lp(4, p).unwrap();
            let x = Vector::from_slice(&[1.0, -2.0, 0.5, 3.0]).unwrap();
            assert_relative_eq!(
                spec.norm(&op.apply(&x).unwrap()).unwrap(),
                spec.norm(&x).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn perturbation_breaks_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_orthogonal(&mut rng, 3).unwrap();
        let t = perturbed(&mut rng, &q, 0.1).unwrap();
        let spec = NormSpec::l2(3).unwrap();
        let cfg = SamplerConfig {
            num_pairs: 100,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            is_scaled_isometry(&spec, &q, &cfg).unwrap(),
            ScaledIsometry::Yes { .. }
        ));
        assert!(matches!(
            is_scaled_isometry(&spec, &t, &cfg).unwrap(),
            ScaledIsometry::No { .. }
        ));
    }

    #[test]
    fn conjugated_diagonal_is_symmetric_with_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_orthogonal(&mut rng, 3).unwrap();
        let t = conjugated_diagonal(&q, &[1.0, 1.5, 2.0]).unwrap();
        let m = t.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_relative_eq!(*v, m[j][i], epsilon = 1e-12);
            }
        }
        let trace: f64 = (0..3).map(|i| m[i][i]).sum();
        assert_relative_eq!(trace, 4.5, epsilon = 1e-12);
    }
}
