//! Empirical operator classification against the orthogonality-preservation
//! theorem: a linear operator preserves Birkhoff-James orthogonality exactly
//! when it is a scalar multiple of an isometry.
//!
//! All checks are sampling-based. Orthogonal pairs are manufactured from
//! the endpoint characterization (`x + my ⊥ y` and `x + My ⊥ y` for the
//! orthogonality segment `[m, M]`), scaled-isometry detection measures the
//! spread of `‖Tx‖/‖x‖` over random points, and the interval-equality check
//! probes the sharpest consequence of preservation: the segment of the
//! pencil `(x, y)` must coincide with the segment of `(Tx, Ty)`. Every stream is
//! deterministic in the configured seed, with one RNG stream per check so
//! the checks do not perturb each other.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::pencil::{is_orthogonal, LinePencil, OrthoInterval};
use crate::space::{NormSpec, Vector};
use crate::tol::{EPS, RATIO_SPREAD_TOL, REJECTION_BUDGET};

const PAIR_STREAM: u64 = 0;
const RATIO_STREAM: u64 = 1;
const INTERVAL_STREAM: u64 = 2;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    matrix: Vec<Vec<f64>>,
}

/// A square matrix acting on the space by row-times-vector products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorWire", into = "OperatorWire")]
pub struct LinearOperator {
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<OperatorWire> for LinearOperator {
    type Error = Error;
    fn try_from(w: OperatorWire) -> Result<Self> {
        LinearOperator::new(w.matrix)
    }
}

impl From<LinearOperator> for OperatorWire {
    fn from(op: LinearOperator) -> Self {
        OperatorWire { matrix: op.matrix }
    }
}

impl LinearOperator {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidOperator);
        }
        for row in &matrix {
            if row.len() != n {
                return Err(Error::InvalidOperator);
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { context: "operator" });
            }
        }
        Ok(LinearOperator { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(matrix)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i] } else { 0.0 })
                    .collect()
            })
            .collect();
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&c| c == 0.0)
    }

    /// Full rank within the crate tolerance.
    pub fn is_invertible(&self) -> bool {
        numeric::rank(self.matrix.clone(), EPS) == self.dim()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Vector::new(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[j][i]).collect())
            .collect();
        LinearOperator { matrix }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        Self::new(matrix)
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.matrix
                .iter()
                .map(|row| row.iter().map(|c| k * c).collect())
                .collect(),
        )
    }

    fn ensure_space(&self, spec: &NormSpec) -> Result<()> {
        if spec.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Deterministic sampling parameters shared by the operator checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub num_pairs: u32,
    pub coordinate_range: f64,
    pub min_norm: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            num_pairs: 1000,
            coordinate_range: 1.0,
            min_norm: 1e-6,
        }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        if self.num_pairs == 0 {
            return Err(Error::InvalidSamplerConfig {
                reason: "num_pairs must be positive",
            });
        }
        if !self.coordinate_range.is_finite() || self.coordinate_range <= 0.0 {
            return Err(Error::InvalidSamplerConfig {
                reason: "coordinate_range must be a positive finite real",
            });
        }
        if !self.min_norm.is_finite() || self.min_norm < 0.0 {
            return Err(Error::InvalidSamplerConfig {
                reason: "min_norm must be a nonnegative finite real",
            });
        }
        Ok(())
    }
}

fn random_vector<R: Rng>(rng: &mut R, dim: usize, range: f64) -> Vector {
    let coords = (0..dim).map(|_| rng.gen_range(-range..=range)).collect();
    Vector::new(coords).expect("coordinates drawn from a finite range")
}

/// Outcome of the orthogonality-preservation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Preservation {
    Preserves,
    /// A sampled pair with `u ⊥ v` but `Tu ⊥̸ Tv`.
    Falsified {
        witness_u: Vector,
        witness_v: Vector,
    },
}

/// Outcome of the ratio-spread check for `T = kU`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ScaledIsometry {
    Yes {
        /// Mean of the sampled ratios `‖Tx‖/‖x‖`.
        k: f64,
    },
    No {
        ratio_min: f64,
        ratio_max: f64,
        witness_lo: Vector,
        witness_hi: Vector,
    },
}

/// [`Preservation`] together with sampling diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreservationCheck {
    pub outcome: Preservation,
    /// Pairs drawn from the orthogonal-pair stream.
    pub pairs_drawn: u32,
    /// Pairs skipped because `Tu` vanished within `min_norm`.
    pub kernel_hits: u32,
}

/// Combined verdict of the theorem suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorVerdict {
    pub preserves: Preservation,
    pub scaled_isometry: ScaledIsometry,
    pub kernel_hits: u32,
    /// The zero operator is reported as `Preserves` + `Yes(0)` but flagged:
    /// it preserves orthogonality vacuously, outside the equivalence.
    pub zero_operator: bool,
    /// Set when the two component checks contradict the equivalence
    /// (`Preserves` with ratio spread, or a falsification of a scaled
    /// isometry). Signals tolerance miscalibration or a defect.
    pub inconsistent: bool,
}

/// Summary of the interval-equality probe over sampled pencils.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalEqualityReport {
    pub pencils_tested: u32,
    /// Image pencils `(Tx, Ty)` that degenerated and were skipped.
    pub degenerate_skipped: u32,
    /// Max over pencils of the Hausdorff distance between the segment of
    /// `(x, y)` and the segment of `(Tx, Ty)`.
    pub max_hausdorff: f64,
}

/// Hausdorff distance between two nonempty closed intervals.
fn interval_distance(a: &OrthoInterval, b: &OrthoInterval) -> f64 {
    (a.lo - b.lo).abs().max((a.hi - b.hi).abs())
}

/// Deterministic stream of Birkhoff-James orthogonal pairs `(u, v)`.
///
/// Each draw takes fresh independent `x, z`, locates the orthogonality
/// segment `[m, M]` of the pencil, and emits `(x + mz, z)` and
/// `(x + Mz, z)` on alternating successful draws. Draws failing the
/// `min_norm` floor, the independence test, or the final orthogonality
/// self-check are rejected; `REJECTION_BUDGET` consecutive rejections
/// abort the stream.
pub struct OrthogonalPairs<'a> {
    spec: &'a NormSpec,
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    upper: bool,
    exhausted: bool,
}

impl<'a> OrthogonalPairs<'a> {
    fn try_draw(&mut self) -> Result<Option<(Vector, Vector)>> {
        let dim = self.spec.dim();
        let x = random_vector(&mut self.rng, dim, self.cfg.coordinate_range);
        let z = random_vector(&mut self.rng, dim, self.cfg.coordinate_range);
        if self.spec.norm(&x)? < self.cfg.min_norm || self.spec.norm(&z)? < self.cfg.min_norm {
            return Ok(None);
        }
        if numeric::residual_ratio(x.coords(), z.coords()) <= EPS {
            return Ok(None);
        }
        let pencil = LinePencil::new(self.spec.clone(), x, z)?;
        let interval = pencil.interval()?;
        let alpha = if self.upper { interval.hi } else { interval.lo };
        let u = pencil.point_at(alpha);
        // A bisected endpoint can sit a hair outside the certified window
        // when the minimum is sharp; only pairs that pass the public
        // orthogonality test are emitted.
        if u.is_zero()
            || self.spec.norm(&u)? < self.cfg.min_norm
            || !is_orthogonal(self.spec, &u, pencil.y())?
        {
            return Ok(None);
        }
        self.upper = !self.upper;
        Ok(Some((u, pencil.y().clone())))
    }
}

impl Iterator for OrthogonalPairs<'_> {
    type Item = Result<(Vector, Vector)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted {
            return None;
        }
        let mut rejections = 0u32;
        loop {
            match self.try_draw() {
                Ok(Some(pair)) => return Some(Ok(pair)),
                Ok(None) => {
                    rejections += 1;
                    if rejections >= REJECTION_BUDGET {
                        self.exhausted = true;
                        return Some(Err(Error::SamplerExhausted {
                            budget: REJECTION_BUDGET,
                        }));
                    }
                }
                Err(e) => {
                    self.exhausted = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// The orthogonal-pair stream for `spec` under `cfg`.
pub fn orthogonal_pair_sampler<'a>(
    spec: &'a NormSpec,
    cfg: &SamplerConfig,
) -> Result<OrthogonalPairs<'a>> {
    cfg.validate()?;
    Ok(OrthogonalPairs {
        spec,
        cfg: *cfg,
        rng: stream_rng(cfg.seed, PAIR_STREAM),
        upper: false,
        exhausted: false,
    })
}

/// Rounds a falsification witness to 2 decimals when the rounded pair
/// still falsifies; otherwise keeps the original pair.
fn minimize_witness(
    spec: &NormSpec,
    op: &LinearOperator,
    u: Vector,
    v: Vector,
) -> Result<(Vector, Vector)> {
    let round2 =
        |w: &Vector| Vector::new(w.coords().iter().map(|c| (c * 100.0).round() / 100.0).collect());
    let (ru, rv) = (round2(&u)?, round2(&v)?);
    if !ru.is_zero() && !rv.is_zero() && is_orthogonal(spec, &ru, &rv)? {
        let (tu, tv) = (op.apply(&ru)?, op.apply(&rv)?);
        if !tu.is_zero() && !is_orthogonal(spec, &tu, &tv)? {
            return Ok((ru, rv));
        }
    }
    Ok((u, v))
}

/// Searches `cfg.num_pairs` sampled orthogonal pairs for one whose image
/// under `T` fails orthogonality. Pairs whose image `Tu` vanishes within
/// `min_norm` are skipped and counted as kernel hits.
pub fn preserves_orthogonality(
    spec: &NormSpec,
    op: &LinearOperator,
    cfg: &SamplerConfig,
) -> Result<PreservationCheck> {
    op.ensure_space(spec)?;
    cfg.validate()?;
    let mut kernel_hits = 0u32;
    let mut pairs_drawn = 0u32;
    let sampler = orthogonal_pair_sampler(spec, cfg)?;
    for pair in sampler.take(cfg.num_pairs as usize) {
        let (u, v) = pair?;
        pairs_drawn += 1;
        let tu = op.apply(&u)?;
        if tu.is_zero() || spec.norm(&tu)? < cfg.min_norm {
            kernel_hits += 1;
            continue;
        }
        let tv = op.apply(&v)?;
        if !is_orthogonal(spec, &tu, &tv)? {
            let (witness_u, witness_v) = minimize_witness(spec, op, u, v)?;
            return Ok(PreservationCheck {
                outcome: Preservation::Falsified {
                    witness_u,
                    witness_v,
                },
                pairs_drawn,
                kernel_hits,
            });
        }
    }
    Ok(PreservationCheck {
        outcome: Preservation::Preserves,
        pairs_drawn,
        kernel_hits,
    })
}

/// Measures the spread of `‖Tx‖/‖x‖` over `cfg.num_pairs` random points.
/// `Yes(k)` when `(max − min) ≤ 1e−8 · mean`, with `k` the mean ratio.
pub fn is_scaled_isometry(
    spec: &NormSpec,
    op: &LinearOperator,
    cfg: &SamplerConfig,
) -> Result<ScaledIsometry> {
    op.ensure_space(spec)?;
    cfg.validate()?;
    let mut rng = stream_rng(cfg.seed, RATIO_STREAM);
    let mut rejections = 0u32;
    let mut collected = 0u32;
    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut witness_lo = None;
    let mut witness_hi = None;
    while collected < cfg.num_pairs {
        let x = random_vector(&mut rng, spec.dim(), cfg.coordinate_range);
        let norm_x = spec.norm(&x)?;
        if norm_x < cfg.min_norm {
            rejections += 1;
            if rejections >= REJECTION_BUDGET {
                return Err(Error::SamplerExhausted {
                    budget: REJECTION_BUDGET,
                });
            }
            continue;
        }
        rejections = 0;
        collected += 1;
        let ratio = spec.norm(&op.apply(&x)?)? / norm_x;
        sum += ratio;
        if ratio < lo {
            lo = ratio;
            witness_lo = Some(x.clone());
        }
        if ratio > hi {
            hi = ratio;
            witness_hi = Some(x);
        }
    }
    let mean = sum / f64::from(collected);
    if hi - lo <= RATIO_SPREAD_TOL * mean {
        Ok(ScaledIsometry::Yes { k: mean })
    } else {
        Ok(ScaledIsometry::No {
            ratio_min: lo,
            ratio_max: hi,
            witness_lo: witness_lo.expect("at least one sample collected"),
            witness_hi: witness_hi.expect("at least one sample collected"),
        })
    }
}

/// Checks interval equality: for sampled independent pencils `(x, y)`,
/// compares the orthogonality segment against the segment of the image
/// pencil `(Tx, Ty)`. A preserving operator must make them coincide.
/// Requires `T` invertible so image pencils stay nondegenerate.
pub fn interval_equality_check(
    spec: &NormSpec,
    op: &LinearOperator,
    cfg: &SamplerConfig,
) -> Result<IntervalEqualityReport> {
    op.ensure_space(spec)?;
    cfg.validate()?;
    if !op.is_invertible() {
        return Err(Error::SingularOperator);
    }
    let mut rng = stream_rng(cfg.seed, INTERVAL_STREAM);
    let mut rejections = 0u32;
    let mut tested = 0u32;
    let mut degenerate = 0u32;
    let mut max_hausdorff = 0.0f64;
    while tested < cfg.num_pairs {
        let mut reject = || -> Result<()> {
            rejections += 1;
            if rejections >= REJECTION_BUDGET {
                return Err(Error::SamplerExhausted {
                    budget: REJECTION_BUDGET,
                });
            }
            Ok(())
        };
        let x = random_vector(&mut rng, spec.dim(), cfg.coordinate_range);
        let y = random_vector(&mut rng, spec.dim(), cfg.coordinate_range);
        if spec.norm(&x)? < cfg.min_norm
            || spec.norm(&y)? < cfg.min_norm
            || numeric::residual_ratio(x.coords(), y.coords()) <= EPS
        {
            reject()?;
            continue;
        }
        let tx = op.apply(&x)?;
        let ty = op.apply(&y)?;
        if numeric::residual_ratio(tx.coords(), ty.coords()) <= EPS {
            degenerate += 1;
            reject()?;
            continue;
        }
        rejections = 0;
        let source = LinePencil::new(spec.clone(), x, y)?.interval()?;
        let image = LinePencil::new(spec.clone(), tx, ty)?.interval()?;
        max_hausdorff = max_hausdorff.max(interval_distance(&source, &image));
        tested += 1;
    }
    Ok(IntervalEqualityReport {
        pencils_tested: tested,
        degenerate_skipped: degenerate,
        max_hausdorff,
    })
}

/// Runs both component checks and cross-validates them against the
/// theorem: preservation and scaled isometry must agree.
pub fn theorem_suite(
    spec: &NormSpec,
    op: &LinearOperator,
    cfg: &SamplerConfig,
) -> Result<OperatorVerdict> {
    op.ensure_space(spec)?;
    cfg.validate()?;
    if op.is_zero() {
        return Ok(OperatorVerdict {
            preserves: Preservation::Preserves,
            scaled_isometry: ScaledIsometry::Yes { k: 0.0 },
            kernel_hits: 0,
            zero_operator: true,
            inconsistent: false,
        });
    }
    let check = preserves_orthogonality(spec, op, cfg)?;
    let scaled = is_scaled_isometry(spec, op, cfg)?;
    let inconsistent = matches!(
        (&check.outcome, &scaled),
        (Preservation::Preserves, ScaledIsometry::No { .. })
            | (Preservation::Falsified { .. }, ScaledIsometry::Yes { .. })
    );
    Ok(OperatorVerdict {
        preserves: check.outcome,
        scaled_isometry: scaled,
        kernel_hits: check.kernel_hits,
        zero_operator: false,
        inconsistent,
    })
}
