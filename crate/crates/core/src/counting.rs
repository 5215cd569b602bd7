//! Counting functions: classical `n`/`N`, the difference counts
//! `n̄_Δ`/`N̄_Δ`, the comparison count `ñ`, common-zero counts `R_{a,b}`,
//! `N_pair`, the index of height `θ_Δ` and the a-point inequality check.
//!
//! Step functions are built from the finite event set `{|w|, |w∓1|}` so
//! that integrated counts are exact sums of logarithms.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::divisor::{ChainKind, Divisor, DivisorPoint, DivisorSource, Radius};
use crate::error::{Error, Result};
use crate::nevanlinna::{characteristic, CircleQuadrature};
use crate::poly::TolerancePolicy;
use crate::scalar::GaussianRational;
use crate::{ExactPoly, ExactRational};

/// A target value `a` for a-points; `Infinity` selects poles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Finite(GaussianRational),
    #[serde(with = "infinity")]
    Infinity,
}

mod infinity {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" || s == "∞" {
            Ok(())
        } else {
            Err(serde::de::Error::custom("expected \"inf\""))
        }
    }
}

impl Value {
    pub fn int(k: i64) -> Self {
        Self::Finite(GaussianRational::from_ints(k, 0))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(a) => write!(f, "{a}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

/// The a-points of `f` as a divisor, with the chain kind they are counted
/// by: zeros of `f - a`, or poles of `f` for `a = ∞`.
pub fn a_points(f: &ExactRational, a: &Value, tol: &TolerancePolicy) -> Result<(Divisor, ChainKind)> {
    match a {
        Value::Infinity => {
            let d = Divisor::of_poly(f.den(), tol)?.reciprocal();
            Ok((d, ChainKind::Pole))
        }
        Value::Finite(a) => {
            let g = f.sub_const(a);
            if g.is_zero() {
                return Err(Error::InvalidArgument(format!("function is identically {a}")));
            }
            Ok((Divisor::of_poly(g.num(), tol)?, ChainKind::Zero))
        }
    }
}

/// Right-continuous integer step function of `r >= 0`:
/// `value(r) = at_origin + Σ_{ρ_k <= r} jump_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingCurve {
    at_origin: i64,
    /// Sorted by radius, merged, zero jumps dropped.
    jumps: Vec<(f64, i64)>,
    /// The curve is only meaningful for `r <= reach`.
    reach: f64,
}

impl CountingCurve {
    fn from_events(at_origin: i64, events: impl IntoIterator<Item = (f64, i64)>, reach: f64) -> Self {
        let mut v: Vec<(f64, i64)> = events.into_iter().filter(|e| e.1 != 0).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut jumps: Vec<(f64, i64)> = Vec::with_capacity(v.len());
        for (rho, d) in v {
            match jumps.last_mut() {
                Some(last) if last.0 == rho => last.1 += d,
                _ => jumps.push((rho, d)),
            }
        }
        jumps.retain(|j| j.1 != 0);
        Self {
            at_origin,
            jumps,
            reach,
        }
    }

    pub fn zero() -> Self {
        Self::from_events(0, [], f64::INFINITY)
    }

    pub fn value(&self, r: f64) -> i64 {
        self.at_origin + self.jumps.iter().take_while(|j| j.0 <= r).map(|j| j.1).sum::<i64>()
    }

    pub fn at_origin(&self) -> i64 {
        self.at_origin
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.0).collect()
    }

    /// Value on `[0, b_0)` followed by the value on each `[b_k, b_{k+1})`.
    pub fn values(&self) -> Vec<i64> {
        let mut out = vec![self.at_origin];
        let mut v = self.at_origin;
        for j in &self.jumps {
            v += j.1;
            out.push(v);
        }
        out
    }

    /// Eventual value, past every breakpoint.
    pub fn limit(&self) -> i64 {
        self.at_origin + self.jumps.iter().map(|j| j.1).sum::<i64>()
    }

    pub fn is_monotone(&self) -> bool {
        self.jumps.iter().all(|j| j.1 > 0)
    }

    /// `Σ c_k · curve_k`.
    pub fn combine(terms: &[(i64, &CountingCurve)]) -> Self {
        let at_origin = terms.iter().map(|(c, k)| c * k.at_origin).sum();
        let reach = terms.iter().map(|(_, k)| k.reach).fold(f64::INFINITY, f64::min);
        let events = terms
            .iter()
            .flat_map(|(c, k)| k.jumps.iter().map(move |j| (j.0, c * j.1)))
            .collect::<Vec<_>>();
        Self::from_events(at_origin, events, reach)
    }
}

/// `N(r) = n(0) log r + Σ_k δ_k log(r/ρ_k)` over breakpoints `ρ_k <= r`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedCurve {
    curve: CountingCurve,
}

impl IntegratedCurve {
    pub fn evaluate(&self, r: f64) -> f64 {
        let c = &self.curve;
        let mut s = if c.at_origin == 0 { 0.0 } else { c.at_origin as f64 * r.ln() };
        for &(rho, d) in c.jumps.iter().take_while(|j| j.0 <= r) {
            s += d as f64 * (r / rho).ln();
        }
        s
    }

    /// Coefficient of `log r` for `r` beyond every breakpoint.
    pub fn slope(&self) -> i64 {
        self.curve.limit()
    }

    /// Constant term for `r` beyond every breakpoint: `-Σ δ_k log ρ_k`.
    pub fn offset(&self) -> f64 {
        -self.curve.jumps.iter().map(|&(rho, d)| d as f64 * rho.ln()).sum::<f64>()
    }

    pub fn counting(&self) -> &CountingCurve {
        &self.curve
    }

    pub fn combine(terms: &[(i64, &IntegratedCurve)]) -> Self {
        let t: Vec<(i64, &CountingCurve)> = terms.iter().map(|(c, k)| (*c, &k.curve)).collect();
        integrate(&CountingCurve::combine(&t))
    }
}

pub fn integrate(curve: &CountingCurve) -> IntegratedCurve {
    IntegratedCurve { curve: curve.clone() }
}

fn points_for(src: &dyn DivisorSource, reach: f64) -> Result<Vec<DivisorPoint>> {
    if reach.is_infinite() {
        return src.all_points().ok_or_else(|| {
            Error::InvalidArgument("an infinite divisor needs a finite reach".into())
        });
    }
    Ok(src.points_within(&Radius::new(reach)?))
}

fn order(src: &dyn DivisorSource, w: &GaussianRational, kind: ChainKind) -> u32 {
    let (z, p) = src.order_at(w);
    match kind {
        ChainKind::Zero => z,
        ChainKind::Pole => p,
    }
}

/// Multiplicity-weighted count of zeros (or poles) in `|z| <= r`.
pub fn n_classical(src: &dyn DivisorSource, r: &Radius, kind: ChainKind) -> u64 {
    src.points_within(r).iter().map(|p| p.mult(kind) as u64).sum()
}

/// `Σ_{|w|<=r} (ord_w - min(ord_w, Ord_{p(w) ∈ D̄(0,r)}))` with `p(w) = w-1`
/// for zeros and `w+1` for poles.
pub fn n_bar_delta(src: &dyn DivisorSource, r: &Radius, kind: ChainKind) -> u64 {
    src.points_within(r)
        .iter()
        .map(|p| {
            let m = p.mult(kind);
            let prev = p.at.add_int(-kind.step());
            let pm = if r.contains(&prev) { order(src, &prev, kind) } else { 0 };
            (m - m.min(pm)) as u64
        })
        .sum()
}

/// `Σ_{|w|<=r} (ord_w - min(ord_w, ord_{w+1}))` over zeros, with
/// `ord_{w+1}` taken in the whole plane.
pub fn n_tilde_iklt(src: &dyn DivisorSource, r: &Radius) -> u64 {
    src.points_within(r)
        .iter()
        .map(|p| {
            let next = order(src, &p.at.add_int(1), ChainKind::Zero);
            (p.zmult - p.zmult.min(next)) as u64
        })
        .sum()
}

/// Step function of `n(r)` up to `reach` (`f64::INFINITY` for finite
/// divisors).
pub fn n_curve(src: &dyn DivisorSource, kind: ChainKind, reach: f64) -> Result<CountingCurve> {
    let mut at_origin = 0i64;
    let mut events = Vec::new();
    for p in points_for(src, reach)? {
        let m = p.mult(kind) as i64;
        if p.at.is_zero_point() {
            at_origin += m;
        } else {
            events.push((p.at.abs_f64(), m));
        }
    }
    Ok(CountingCurve::from_events(at_origin, events, reach))
}

/// Step function of `n̄_Δ(r)`. Each point `w` of multiplicity `m` adds `m`
/// once `w` is inside and loses `min(m, ord_{p(w)})` once its predecessor
/// `p(w)` is inside as well, so the curve may step down.
pub fn n_bar_delta_curve(src: &dyn DivisorSource, kind: ChainKind, reach: f64) -> Result<CountingCurve> {
    let mut at_origin = 0i64;
    let mut events = Vec::new();
    for p in points_for(src, reach)? {
        let m = p.mult(kind);
        if m == 0 {
            continue;
        }
        let rw = p.at.abs_f64();
        let prev = p.at.add_int(-kind.step());
        let rp = prev.abs_f64();
        let absorbed = m.min(order(src, &prev, kind)) as i64;
        if p.at.is_zero_point() {
            at_origin += m as i64;
        } else {
            events.push((rw, m as i64));
        }
        if absorbed > 0 && rp <= reach {
            events.push((rw.max(rp), -absorbed));
        }
    }
    Ok(CountingCurve::from_events(at_origin, events, reach))
}

impl GaussianRational {
    fn is_zero_point(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// `N(r)` for the zeros or poles of a source.
pub fn big_n(src: &dyn DivisorSource, kind: ChainKind, reach: f64) -> Result<IntegratedCurve> {
    Ok(integrate(&n_curve(src, kind, reach)?))
}

/// `N̄_Δ(r)` for the zeros or poles of a source.
pub fn big_n_bar_delta(src: &dyn DivisorSource, kind: ChainKind, reach: f64) -> Result<IntegratedCurve> {
    Ok(integrate(&n_bar_delta_curve(src, kind, reach)?))
}

/// Common zeros of `a` and `b` with multiplicity in `|z| <= r`.
pub fn common_zero_count(a: &ExactPoly, b: &ExactPoly, r: &Radius, tol: &TolerancePolicy) -> Result<u64> {
    let g = common_divisor(a, b, tol)?;
    Ok(n_classical(&g, r, ChainKind::Zero))
}

/// `R_{a,b}(r)`, the integrated common-zero count.
pub fn r_ab(a: &ExactPoly, b: &ExactPoly, tol: &TolerancePolicy) -> Result<IntegratedCurve> {
    let g = common_divisor(a, b, tol)?;
    big_n(&g, ChainKind::Zero, f64::INFINITY)
}

fn common_divisor(a: &ExactPoly, b: &ExactPoly, tol: &TolerancePolicy) -> Result<Divisor> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = a.gcd(b);
    if g.is_constant() {
        return Ok(Divisor::new());
    }
    Divisor::of_poly(&g, tol)
}

/// `N_pair(r, f) = 2N(r, f) - N(r, Δf) + N(r, 1/Δf)`.
pub fn n_pair(f: &ExactRational, tol: &TolerancePolicy) -> Result<IntegratedCurve> {
    let df = f.delta(1);
    if df.is_zero() {
        return Err(Error::precondition("Δf is not identically zero", None));
    }
    let poles_f = Divisor::of_poly(f.den(), tol)?;
    let poles_df = Divisor::of_poly(df.den(), tol)?;
    let zeros_df = Divisor::of_poly(df.num(), tol)?;
    let nf = big_n(&poles_f, ChainKind::Zero, f64::INFINITY)?;
    let ndf = big_n(&poles_df, ChainKind::Zero, f64::INFINITY)?;
    let nzdf = big_n(&zeros_df, ChainKind::Zero, f64::INFINITY)?;
    Ok(IntegratedCurve::combine(&[(2, &nf), (-1, &ndf), (1, &nzdf)]))
}

/// Index of height of `a`: the exact eventual slope ratio
/// `(N - N̄_Δ) / T` and the infimum of the same ratio over a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaDelta {
    #[serde(serialize_with = "ratio_string")]
    pub slope: Rational64,
    pub grid_inf: f64,
}

fn ratio_string<S: serde::Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn theta_delta(
    f: &ExactRational,
    a: &Value,
    grid: &[f64],
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<ThetaDelta> {
    if f.is_constant() {
        return Err(Error::precondition("f is nonconstant", None));
    }
    let (d, kind) = a_points(f, a, tol)?;
    let n = big_n(&d, kind, f64::INFINITY)?;
    let nb = big_n_bar_delta(&d, kind, f64::INFINITY)?;
    let slope = Rational64::new(n.slope() - nb.slope(), f.degree() as i64);
    let mut grid_inf = f64::INFINITY;
    for &r in grid {
        let t = characteristic(f, r, quad, tol)?;
        if t > 0.0 {
            grid_inf = grid_inf.min((n.evaluate(r) - nb.evaluate(r)) / t);
        }
    }
    Ok(ThetaDelta { slope, grid_inf })
}

/// Both sides of `Σ n(r, 1/(f-a_j)) <= n(r, 1/Δf) + Σ n̄_Δ(r, 1/(f-a_j))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ADCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

pub fn a_d_check(f: &ExactPoly, values: &[GaussianRational], r: &Radius, tol: &TolerancePolicy) -> Result<ADCheck> {
    if f.is_constant() {
        return Err(Error::precondition("f is a nonconstant polynomial", None));
    }
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = values.iter().find(|a| !seen.insert((*a).clone())) {
        return Err(Error::InvalidArgument(format!("value {dup} is repeated")));
    }
    let df = Divisor::of_poly(&f.delta(1), tol)?;
    let mut lhs = 0;
    let mut rhs = n_classical(&df, r, ChainKind::Zero);
    for a in values {
        let d = Divisor::of_poly(&(f - &ExactPoly::constant(a.clone())), tol)?;
        lhs += n_classical(&d, r, ChainKind::Zero);
        rhs += n_bar_delta(&d, r, ChainKind::Zero);
    }
    Ok(ADCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// `count` radii spaced geometrically from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            // interpolate exponents so decade grids land on exact powers of ten
            let (a, b) = (lo.log10(), hi.log10());
            let last = (count - 1) as f64;
            (0..count)
                .map(|k| match k {
                    0 => lo,
                    k if k + 1 == count => hi,
                    k => 10f64.powf(a + (b - a) * k as f64 / last),
                })
                .collect()
        }
    }
}

/// CSV with header `r,n,N,nBarDelta,NBarDelta` over the grid.
pub fn curve_csv(src: &dyn DivisorSource, kind: ChainKind, grid: &[f64]) -> Result<String> {
    let reach = if src.all_points().is_some() {
        f64::INFINITY
    } else {
        grid.iter().copied().fold(0.0, f64::max)
    };
    let n = n_curve(src, kind, reach)?;
    let nb = n_bar_delta_curve(src, kind, reach)?;
    let (bn, bnb) = (integrate(&n), integrate(&nb));
    let mut out = String::from("r,n,N,nBarDelta,NBarDelta\n");
    for &r in grid {
        let rad = Radius::new(r)?;
        writeln!(
            out,
            "{r},{},{},{},{}",
            n_classical(src, &rad, kind),
            bn.evaluate(r),
            n_bar_delta(src, &rad, kind),
            bnb.evaluate(r)
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Multiplicities of a finite divisor keyed by point, for oracles.
pub fn multiplicities(d: &Divisor, kind: ChainKind) -> BTreeMap<GaussianRational, u32> {
    d.iter()
        .filter(|p| p.mult(kind) > 0)
        .map(|p| {
            let m = p.mult(kind);
            (p.at, m)
        })
        .collect()
}
