//! Zero/pole divisors, lengths of zeros and poles, chain decompositions,
//! difference radicals and the shifting-prime predicates.

mod chains;
mod io;
mod prime;
mod snap;

pub use chains::{
    chain_decompose, chain_decompose_with, classic_radical, difference_radical, length_of_pole_at,
    length_of_zero_at, Chain, ChainDecomposition, ChainKind,
};
pub use io::{DivisorFile, LatticeSpec};
pub use prime::{pairwise_shifting_prime, relatively_shifting_prime, ShiftPrime};
pub use snap::DivisorBuilder;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{FactoredPoly, TolerancePolicy};
use crate::scalar::GaussianRational;
use crate::{ExactPoly, ExactRational};

/// Closed disc `|z| <= r` about the origin. Membership is decided exactly:
/// the finite double `r` is converted to its exact rational value.
#[derive(Debug, Clone, PartialEq)]
pub struct Radius {
    value: f64,
    square: BigRational,
}

impl Radius {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidArgument(format!("radius must be finite and >= 0, got {r}")));
        }
        let exact = BigRational::from_float(r).expect("finite");
        Ok(Self {
            value: r,
            square: &exact * &exact,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn contains(&self, w: &GaussianRational) -> bool {
        w.norm_sqr() <= self.square
    }
}

/// A point of a divisor. `zmult` and `pmult` are never both nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorPoint {
    #[serde(flatten)]
    pub at: GaussianRational,
    pub zmult: u32,
    pub pmult: u32,
}

impl DivisorPoint {
    pub fn zero(at: GaussianRational, mult: u32) -> Self {
        Self { at, zmult: mult, pmult: 0 }
    }

    pub fn pole(at: GaussianRational, mult: u32) -> Self {
        Self { at, zmult: 0, pmult: mult }
    }

    pub fn mult(&self, kind: ChainKind) -> u32 {
        match kind {
            ChainKind::Zero => self.zmult,
            ChainKind::Pole => self.pmult,
        }
    }
}

/// Anything that can list its zeros and poles inside a disc.
///
/// `points_within` is monotone in the radius and deterministic; it returns
/// points in ascending canonical order.
pub trait DivisorSource: Send + Sync {
    fn points_within(&self, r: &Radius) -> Vec<DivisorPoint>;

    /// `(zmult, pmult)` at `w`, over the whole plane.
    fn order_at(&self, w: &GaussianRational) -> (u32, u32);

    /// Every point, when the divisor is finite.
    fn all_points(&self) -> Option<Vec<DivisorPoint>>;
}

/// Finite divisor, e.g. of a rational function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Divisor {
    points: BTreeMap<GaussianRational, (u32, u32)>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a reduced divisor; zero and pole multiplicity at the same
    /// point cancel.
    pub fn from_points(points: impl IntoIterator<Item = DivisorPoint>) -> Self {
        let mut net: BTreeMap<GaussianRational, i64> = BTreeMap::new();
        for p in points {
            *net.entry(p.at).or_default() += p.zmult as i64 - p.pmult as i64;
        }
        Self::from_net(net)
    }

    fn from_net(net: BTreeMap<GaussianRational, i64>) -> Self {
        let points = net
            .into_iter()
            .filter(|(_, m)| *m != 0)
            .map(|(w, m)| {
                let v = if m > 0 { (m as u32, 0) } else { (0, (-m) as u32) };
                (w, v)
            })
            .collect();
        Self { points }
    }

    /// Zeros of an exactly factored polynomial.
    pub fn from_factored(p: &FactoredPoly<GaussianRational>) -> Self {
        Self::from_points(p.roots.iter().map(|(r, m)| DivisorPoint::zero(r.clone(), *m)))
    }

    /// Divisor of a polynomial; roots outside `ℚ(i)` are located
    /// numerically and snapped (see [`DivisorBuilder`]).
    pub fn of_poly(p: &ExactPoly, tol: &TolerancePolicy) -> Result<Self> {
        let mut b = DivisorBuilder::new(*tol);
        b.add_zeros_of(p)?;
        b.build()
    }

    /// Divisor of a rational function.
    pub fn of_rational(f: &ExactRational, tol: &TolerancePolicy) -> Result<Self> {
        let mut b = DivisorBuilder::new(*tol);
        b.add_rational(f)?;
        b.build()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = DivisorPoint> + '_ {
        self.points.iter().map(|(w, (z, p))| DivisorPoint {
            at: w.clone(),
            zmult: *z,
            pmult: *p,
        })
    }

    /// Divisor of the product of the two functions.
    pub fn product(&self, other: &Self) -> Self {
        Self::from_points(self.iter().chain(other.iter()))
    }

    /// Divisor of `1/f`.
    pub fn reciprocal(&self) -> Self {
        Self {
            points: self.points.iter().map(|(w, (z, p))| (w.clone(), (*p, *z))).collect(),
        }
    }

    /// Only the zeros (poles dropped).
    pub fn zeros_only(&self) -> Self {
        Self {
            points: self
                .points
                .iter()
                .filter(|(_, (z, _))| *z > 0)
                .map(|(w, (z, _))| (w.clone(), (*z, 0)))
                .collect(),
        }
    }

    pub fn poles_only(&self) -> Self {
        self.reciprocal().zeros_only().reciprocal()
    }

    /// Total multiplicity of the given kind.
    pub fn degree(&self, kind: ChainKind) -> u64 {
        self.iter().map(|p| p.mult(kind) as u64).sum()
    }

    /// Largest modulus of any point, or 0 for the empty divisor.
    pub fn max_modulus(&self) -> f64 {
        self.points.keys().map(|w| w.abs_f64()).fold(0.0, f64::max)
    }

    /// A radius whose disc contains every point and every unit neighbour.
    pub fn covering_radius(&self) -> f64 {
        (self.max_modulus() + 2.0).ceil()
    }
}

impl DivisorSource for Divisor {
    fn points_within(&self, r: &Radius) -> Vec<DivisorPoint> {
        self.iter().filter(|p| r.contains(&p.at)).collect()
    }

    fn order_at(&self, w: &GaussianRational) -> (u32, u32) {
        self.points.get(w).copied().unwrap_or((0, 0))
    }

    fn all_points(&self) -> Option<Vec<DivisorPoint>> {
        Some(self.iter().collect())
    }
}

/// Direction in which a lattice family extends from its anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeDirection {
    /// `anchor, anchor+1, anchor+2, …`
    Forward,
    /// `anchor, anchor-1, anchor-2, …` (the poles of `Γ` with anchor 0)
    Backward,
    /// `anchor + ℤ` (the zeros of `sin π(z - anchor)`)
    Both,
}

/// Integer-translate family of points with a common multiplicity, clipped
/// to whatever disc is asked for. Stands in for `sin πz` and `Γ(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSource {
    pub anchor: GaussianRational,
    pub direction: LatticeDirection,
    pub mult: u32,
    pub kind: ChainKind,
}

impl LatticeSource {
    /// Zeros of `sin π(z - shift)`.
    pub fn sine(shift: GaussianRational) -> Self {
        Self {
            anchor: shift,
            direction: LatticeDirection::Both,
            mult: 1,
            kind: ChainKind::Zero,
        }
    }

    /// Poles of `Γ(z)`.
    pub fn gamma() -> Self {
        Self {
            anchor: GaussianRational::zero(),
            direction: LatticeDirection::Backward,
            mult: 1,
            kind: ChainKind::Pole,
        }
    }

    fn point(&self, w: GaussianRational) -> DivisorPoint {
        match self.kind {
            ChainKind::Zero => DivisorPoint::zero(w, self.mult),
            ChainKind::Pole => DivisorPoint::pole(w, self.mult),
        }
    }

    /// Offsets `k` (so that the point is `anchor + k`) that may lie in the
    /// disc; exact membership is checked by the caller.
    fn offset_range(&self, r: f64) -> Option<(i64, i64)> {
        let im = self.anchor.im().to_f64()?;
        if im.abs() > r + 1.0 {
            return None;
        }
        let re = self.anchor.re().to_f64()?;
        let half = (r * r - im * im).max(0.0).sqrt();
        let lo = (-half - re).floor() as i64 - 1;
        let hi = (half - re).ceil() as i64 + 1;
        let (lo, hi) = match self.direction {
            LatticeDirection::Forward => (lo.max(0), hi),
            LatticeDirection::Backward => (lo, hi.min(0)),
            LatticeDirection::Both => (lo, hi),
        };
        (lo <= hi).then_some((lo, hi))
    }
}

impl DivisorSource for LatticeSource {
    fn points_within(&self, r: &Radius) -> Vec<DivisorPoint> {
        let Some((lo, hi)) = self.offset_range(r.value()) else {
            return Vec::new();
        };
        (lo..=hi)
            .map(|k| self.anchor.add_int(k))
            .filter(|w| r.contains(w))
            .map(|w| self.point(w))
            .collect()
    }

    fn order_at(&self, w: &GaussianRational) -> (u32, u32) {
        let d = w - &self.anchor;
        let hit = d.im().is_zero()
            && d.re().is_integer()
            && match self.direction {
                LatticeDirection::Forward => !d.re().is_negative(),
                LatticeDirection::Backward => !d.re().is_positive(),
                LatticeDirection::Both => true,
            };
        match (hit, self.kind) {
            (false, _) => (0, 0),
            (true, ChainKind::Zero) => (self.mult, 0),
            (true, ChainKind::Pole) => (0, self.mult),
        }
    }

    fn all_points(&self) -> Option<Vec<DivisorPoint>> {
        None
    }
}

/// Divisor of a product of functions given by their sources.
#[derive(Clone, Default)]
pub struct ProductSource {
    factors: Vec<Arc<dyn DivisorSource>>,
}

impl ProductSource {
    pub fn new(factors: Vec<Arc<dyn DivisorSource>>) -> Self {
        Self { factors }
    }

    pub fn push(&mut self, s: Arc<dyn DivisorSource>) {
        self.factors.push(s);
    }
}

impl DivisorSource for ProductSource {
    fn points_within(&self, r: &Radius) -> Vec<DivisorPoint> {
        let d = Divisor::from_points(self.factors.iter().flat_map(|f| f.points_within(r)));
        d.iter().collect()
    }

    fn order_at(&self, w: &GaussianRational) -> (u32, u32) {
        let net: i64 = self
            .factors
            .iter()
            .map(|f| {
                let (z, p) = f.order_at(w);
                z as i64 - p as i64
            })
            .sum();
        if net >= 0 {
            (net as u32, 0)
        } else {
            (0, (-net) as u32)
        }
    }

    fn all_points(&self) -> Option<Vec<DivisorPoint>> {
        let mut all = Vec::new();
        for f in &self.factors {
            all.extend(f.all_points()?);
        }
        Some(Divisor::from_points(all).iter().collect())
    }
}

/// Helper for code that wants a zero test only.
pub(crate) fn is_kind_at(src: &dyn DivisorSource, w: &GaussianRational, kind: ChainKind) -> bool {
    let (z, p) = src.order_at(w);
    match kind {
        ChainKind::Zero => z > 0,
        ChainKind::Pole => p > 0,
    }
}
