//! Norm families on ℝⁿ, dual pairings, and exact support-functional sets.
//!
//! Three families are supported, each with an exactly computable support set
//! `S(x) = {f in the dual : ‖f‖* = 1, f(x) = ‖x‖}`:
//!
//! - `Lp` for `1 ≤ p ≤ ∞`,
//! - weighted `Lp` (reduced to plain `Lp` by a diagonal change of
//!   coordinates at construction time),
//! - polyhedral norms `x ↦ max_j |⟨g_j, x⟩|` over a finite generator set.
//!
//! `S(x)` is either a single functional (smooth points) or the convex hull
//! of finitely many vertices; downstream code only ever needs extreme values
//! of linear functions over `S(x)`, which the vertex list provides exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::tol::EPS;

/// A point of ℝⁿ. Coordinates are validated finite at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context: "vector" });
        }
        Ok(Vector { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// True iff every coordinate is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    /// `self + alpha * other`. Dimensions must already agree.
    pub(crate) fn axpy(&self, alpha: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.coords
    }
}

/// An element of the dual space, applied to a [`Vector`] by the standard
/// pairing `Σ fᵢ xᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Functional {
    coords: Vec<f64>,
}

impl Functional {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "functional",
            });
        }
        Ok(Functional { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The dual pairing `f(y) = Σ fᵢ yᵢ`.
    pub fn pairing(&self, y: &Vector) -> Result<f64> {
        if self.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: y.dim(),
            });
        }
        Ok(self.pairing_unchecked(y))
    }

    pub(crate) fn pairing_unchecked(&self, y: &Vector) -> f64 {
        self.coords
            .iter()
            .zip(y.coords())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl TryFrom<Vec<f64>> for Functional {
    type Error = Error;
    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Functional::new(coords)
    }
}

impl From<Functional> for Vec<f64> {
    fn from(f: Functional) -> Self {
        f.coords
    }
}

/// The exponent of an `Lp` norm: a finite `p ≥ 1` or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if p.is_finite() && p >= 1.0 => Ok(self),
            Exponent::Finite(p) => Err(Error::InvalidExponent { p }),
            Exponent::Infinity => Ok(self),
        }
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExponentVisitor;
        impl serde::de::Visitor<'_> for ExponentVisitor {
            type Value = Exponent;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                if v == "inf" {
                    Ok(Exponent::Infinity)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(ExponentVisitor)
    }
}

/// Wire format for a normed space, as consumed by the CLI and FFI layers:
/// `{ "dim": n, "norm": { "type": ... } }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormDescriptor {
    pub dim: usize,
    pub norm: NormKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NormKind {
    Lp {
        p: Exponent,
    },
    WeightedLp {
        p: Exponent,
        weights: Vec<f64>,
    },
    Polyhedral {
        generators: Vec<Vec<f64>>,
    },
}

/// Runtime form of the norm. Weighted `Lp` is folded into `Lp` plus a
/// diagonal scaling, so only two code paths exist for support sets.
#[derive(Debug, Clone, PartialEq)]
enum BaseNorm {
    Lp(Exponent),
    /// Deduplicated generators; `g` and `-g` are implicitly identified.
    Polyhedral(Vec<Functional>),
}

/// A declarative norm on ℝⁿ with exact support-set computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormDescriptor", into = "NormDescriptor")]
pub struct NormSpec {
    dim: usize,
    base: BaseNorm,
    /// Diagonal pre-scaling from the weighted-`Lp` reduction.
    scale: Option<Vec<f64>>,
    descriptor: NormDescriptor,
}

impl NormSpec {
    /// The `Lp` norm on ℝⁿ, `1 ≤ p ≤ ∞`.
    pub fn lp(dim: usize, p: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let p = p.validate()?;
        Ok(NormSpec {
            dim,
            base: BaseNorm::Lp(p),
            scale: None,
            descriptor: NormDescriptor {
                dim,
                norm: NormKind::Lp { p },
            },
        })
    }

    pub fn l1(dim: usize) -> Result<Self> {
        Self::lp(dim, Exponent::Finite(1.0))
    }

    pub fn l2(dim: usize) -> Result<Self> {
        Self::lp(dim, Exponent::Finite(2.0))
    }

    pub fn linf(dim: usize) -> Result<Self> {
        Self::lp(dim, Exponent::Infinity)
    }

    /// Weighted `Lp`: `(Σ wᵢ|xᵢ|^p)^{1/p}` for finite `p`, `max wᵢ|xᵢ|`
    /// for `p = ∞`. Reduced to plain `Lp` through the substitution
    /// `xᵢ ↦ wᵢ^{1/p} xᵢ` (resp. `xᵢ ↦ wᵢ xᵢ`).
    pub fn weighted_lp(dim: usize, p: Exponent, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let p = p.validate()?;
        if weights.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidWeight);
        }
        let scale: Vec<f64> = match p {
            Exponent::Finite(p) => weights.iter().map(|w| w.powf(1.0 / p)).collect(),
            Exponent::Infinity => weights.clone(),
        };
        Ok(NormSpec {
            dim,
            base: BaseNorm::Lp(p),
            scale: Some(scale),
            descriptor: NormDescriptor {
                dim,
                norm: NormKind::WeightedLp { p, weights },
            },
        })
    }

    /// Polyhedral norm `x ↦ max_j |⟨g_j, x⟩|`. The generator set is
    /// implicitly symmetric (`g` and `-g` give the same norm); duplicates
    /// up to sign are dropped. The generators must span ℝⁿ so the norm is
    /// positive definite.
    pub fn polyhedral(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let descriptor = NormDescriptor {
            dim,
            norm: NormKind::Polyhedral {
                generators: generators.clone(),
            },
        };
        let mut kept: Vec<Functional> = Vec::new();
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            let f = Functional::new(g)?;
            if !kept.iter().any(|k| same_up_to_sign(k.coords(), f.coords())) {
                kept.push(f);
            }
        }
        let rank = numeric::rank(kept.iter().map(|g| g.coords().to_vec()).collect(), EPS);
        if rank < dim {
            return Err(Error::DegenerateGenerators { rank, dim });
        }
        Ok(NormSpec {
            dim,
            base: BaseNorm::Polyhedral(kept),
            scale: None,
            descriptor,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The wire-format descriptor this spec was built from.
    pub fn descriptor(&self) -> &NormDescriptor {
        &self.descriptor
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: d,
            });
        }
        Ok(())
    }

    /// Coordinates after the weighted-`Lp` scaling, if any.
    fn scaled(&self, x: &[f64]) -> Vec<f64> {
        match &self.scale {
            Some(s) => x.iter().zip(s).map(|(v, s)| v * s).collect(),
            None => x.to_vec(),
        }
    }

    /// Evaluates `‖x‖`. Zero exactly when `x = 0`.
    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x.dim())?;
        let z = self.scaled(x.coords());
        Ok(match &self.base {
            BaseNorm::Lp(p) => lp_norm(&z, *p),
            BaseNorm::Polyhedral(gens) => gens
                .iter()
                .map(|g| dot(g.coords(), &z).abs())
                .fold(0.0, f64::max),
        })
    }

    /// The dual norm `‖f‖* = max {f(x) : ‖x‖ ≤ 1}`: the conjugate-exponent
    /// `Lq` norm for `Lp`, its weighted analogue, and for polyhedral norms
    /// the gauge of `conv{±g_j}` (computed by a small linear program).
    pub fn dual_norm(&self, f: &Functional) -> Result<f64> {
        self.check_dim(f.dim())?;
        let g: Vec<f64> = match &self.scale {
            Some(s) => f.coords().iter().zip(s).map(|(v, s)| v / s).collect(),
            None => f.coords().to_vec(),
        };
        match &self.base {
            BaseNorm::Lp(p) => Ok(lp_norm(&g, p.conjugate())),
            BaseNorm::Polyhedral(gens) => polytope_gauge(gens, &g),
        }
    }

    /// The support set `S(x) = {f : ‖f‖* = 1, f(x) = ‖x‖}` of a nonzero
    /// point, as a singleton (smooth point) or the vertex list of a
    /// polytope.
    ///
    /// For `Lp` with `1 < p < ∞` every nonzero point is smooth. For `L1`
    /// the vertices are all `±1` completions of the sign pattern over the
    /// zero coordinates (so a point with `z` zero coordinates has `2^z`
    /// vertices). For `L∞` and polyhedral norms the vertices are the
    /// signed generators achieving the max.
    pub fn support_set(&self, x: &Vector) -> Result<SupportSet> {
        self.check_dim(x.dim())?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let z = self.scaled(x.coords());
        let mut vertices = match &self.base {
            BaseNorm::Lp(p) => lp_support(&z, *p),
            BaseNorm::Polyhedral(gens) => polyhedral_support(&z, gens),
        };
        if let Some(s) = &self.scale {
            for f in &mut vertices {
                for (c, s) in f.coords.iter_mut().zip(s) {
                    *c *= s;
                }
            }
        }
        Ok(SupportSet::from_vertices(vertices))
    }
}

impl TryFrom<NormDescriptor> for NormSpec {
    type Error = Error;
    fn try_from(d: NormDescriptor) -> Result<Self> {
        match d.norm {
            NormKind::Lp { p } => NormSpec::lp(d.dim, p),
            NormKind::WeightedLp { p, weights } => NormSpec::weighted_lp(d.dim, p, weights),
            NormKind::Polyhedral { generators } => NormSpec::polyhedral(d.dim, generators),
        }
    }
}

impl From<NormSpec> for NormDescriptor {
    fn from(s: NormSpec) -> Self {
        s.descriptor
    }
}

/// The support set of a point: either a unique functional or the vertex
/// representation of a polytope of functionals.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportSet {
    Singleton(Functional),
    Polytope(Vec<Functional>),
}

impl SupportSet {
    fn from_vertices(mut vertices: Vec<Functional>) -> Self {
        debug_assert!(!vertices.is_empty());
        if vertices.len() == 1 {
            SupportSet::Singleton(vertices.pop().unwrap())
        } else {
            SupportSet::Polytope(vertices)
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self, SupportSet::Singleton(_))
    }

    pub fn vertices(&self) -> &[Functional] {
        match self {
            SupportSet::Singleton(f) => std::slice::from_ref(f),
            SupportSet::Polytope(v) => v,
        }
    }

    /// `(min, max)` of `f(y)` over the vertices. Extreme values of a linear
    /// function over a polytope are attained at vertices, so this is the
    /// exact range over the whole support set.
    pub fn pairing_range(&self, y: &Vector) -> Result<(f64, f64)> {
        let vertices = self.vertices();
        if vertices[0].dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                expected: vertices[0].dim(),
                found: y.dim(),
            });
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for f in vertices {
            let v = f.pairing_unchecked(y);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok((lo, hi))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn same_up_to_sign(a: &[f64], b: &[f64]) -> bool {
    let scale = a
        .iter()
        .chain(b)
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    let close = |sign: f64| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - sign * y).abs() <= EPS * scale)
    };
    close(1.0) || close(-1.0)
}

fn signum_strict(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `Lp` norm with overflow-safe scaling by the max coordinate.
fn lp_norm(z: &[f64], p: Exponent) -> f64 {
    let m = z.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => m,
        Exponent::Finite(1.0) => z.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(2.0) => {
            m * z.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
        }
        Exponent::Finite(p) => {
            m * z
                .iter()
                .map(|v| (v.abs() / m).powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        }
    }
}

fn lp_support(z: &[f64], p: Exponent) -> Vec<Functional> {
    match p {
        Exponent::Finite(1.0) => l1_support(z),
        Exponent::Infinity => linf_support(z),
        Exponent::Finite(p) => {
            // Unique support functional of a smooth point:
            // fᵢ = sign(zᵢ) (|zᵢ|/‖z‖)^{p-1}.
            let norm = lp_norm(z, Exponent::Finite(p));
            let coords = z
                .iter()
                .map(|&v| signum_strict(v) * (v.abs() / norm).powf(p - 1.0))
                .collect();
            vec![Functional { coords }]
        }
    }
}

fn l1_support(z: &[f64]) -> Vec<Functional> {
    let norm: f64 = z.iter().map(|v| v.abs()).sum();
    let tol = EPS * norm;
    let zero_idx: Vec<usize> = (0..z.len()).filter(|&i| z[i].abs() <= tol).collect();
    let signs: Vec<f64> = z
        .iter()
        .map(|&v| if v.abs() <= tol { 0.0 } else { signum_strict(v) })
        .collect();
    if zero_idx.is_empty() {
        return vec![Functional { coords: signs }];
    }
    // All ±1 completions over the zero coordinates, +1 first.
    let count = 1usize << zero_idx.len();
    let mut vertices = Vec::with_capacity(count);
    for mask in 0..count {
        let mut coords = signs.clone();
        for (bit, &i) in zero_idx.iter().enumerate() {
            coords[i] = if mask & (1 << bit) == 0 { 1.0 } else { -1.0 };
        }
        vertices.push(Functional { coords });
    }
    vertices
}

fn linf_support(z: &[f64]) -> Vec<Functional> {
    let norm = z.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let threshold = norm * (1.0 - EPS);
    let mut vertices = Vec::new();
    for (i, &v) in z.iter().enumerate() {
        if v.abs() >= threshold {
            let mut coords = vec![0.0; z.len()];
            coords[i] = signum_strict(v);
            vertices.push(Functional { coords });
        }
    }
    vertices
}

fn polyhedral_support(z: &[f64], gens: &[Functional]) -> Vec<Functional> {
    let vals: Vec<f64> = gens.iter().map(|g| dot(g.coords(), z)).collect();
    let norm = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let threshold = norm * (1.0 - EPS);
    gens.iter()
        .zip(&vals)
        .filter(|(_, &v)| v.abs() >= threshold)
        .map(|(g, &v)| {
            let sign = signum_strict(v);
            Functional {
                coords: g.coords().iter().map(|c| sign * c).collect(),
            }
        })
        .collect()
}

/// Gauge of `conv{±g_j}` at `f`: the least `Σ|c_j|` with `Σ c_j g_j = f`.
/// This is the dual norm of the polyhedral norm generated by the `g_j`.
fn polytope_gauge(gens: &[Functional], f: &[f64]) -> Result<f64> {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    if f.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    // Split c_j = c⁺_j − c⁻_j with both parts nonnegative; the objective
    // Σ(c⁺+c⁻) then equals Σ|c_j| at the optimum.
    let pos: Vec<_> = gens
        .iter()
        .map(|_| problem.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let neg: Vec<_> = gens
        .iter()
        .map(|_| problem.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    for (i, &rhs) in f.iter().enumerate() {
        let mut terms = Vec::with_capacity(2 * gens.len());
        for (j, g) in gens.iter().enumerate() {
            let c = g.coords()[i];
            terms.push((pos[j], c));
            terms.push((neg[j], -c));
        }
        problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, rhs);
    }
    let solution = problem.solve().map_err(|e| Error::DualNormLp {
        reason: e.to_string(),
    })?;
    Ok(solution.objective())
}
