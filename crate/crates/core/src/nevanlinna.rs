//! Circle quadrature for proximity and characteristic functions, the
//! Cartan-type characteristic `T̃` of a tuple of entire functions, and the
//! residual checks built on them.

use num_complex::Complex;
use num_traits::{Float, FloatConst};

use crate::counting::{big_n, r_ab, IntegratedCurve};
use crate::divisor::{ChainKind, Divisor};
use crate::error::{Error, Result};
use crate::poly::{Poly, TolerancePolicy};
use crate::rational::RationalFunction;
use crate::scalar::{GaussianRational, Scalar};
use crate::{ExactPoly, ExactRational};

/// Composite trapezoid rule on `[0, 2π)` with equally spaced nodes.
///
/// When the integrand is not finite at some node (a zero or pole sits on
/// it), every node is shifted by `nudge`, a thousandth of half the spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleQuadrature<F> {
    nodes: usize,
    nudge: F,
}

impl<F: Float + FloatConst> CircleQuadrature<F> {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 4 {
            return Err(Error::InvalidTolerance(format!("at least 4 quadrature nodes needed, got {nodes}")));
        }
        let spacing = F::TAU() / F::from(nodes).expect("node count fits");
        let nudge = spacing * F::from(0.5e-3).expect("constant");
        Ok(Self { nodes, nudge })
    }

    pub fn from_policy(tol: &TolerancePolicy) -> Result<Self> {
        Self::new(tol.quadrature_nodes)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn nudge(&self) -> F {
        self.nudge
    }

    /// Trapezoid mean of `g(r e^{iθ})` with nodes at `θ_k + offset`.
    pub fn mean_at(&self, r: F, offset: F, g: impl Fn(Complex<F>) -> F) -> F {
        let n = F::from(self.nodes).expect("node count fits");
        let h = F::TAU() / n;
        let mut s = F::zero();
        for k in 0..self.nodes {
            let t = h * F::from(k).expect("index fits") + offset;
            s = s + g(Complex::from_polar(r, t));
        }
        s / n
    }

    /// `(1/2π) ∮ g(r e^{iθ}) dθ`, nudged if a node is singular.
    pub fn mean(&self, r: F, g: impl Fn(Complex<F>) -> F) -> F {
        let v = self.mean_at(r, F::zero(), &g);
        if v.is_finite() {
            v
        } else {
            self.mean_at(r, self.nudge, g)
        }
    }
}

/// `log|f(z)|` for something that can be evaluated on a circle.
pub trait LogModulus<F> {
    fn log_abs(&self, z: Complex<F>) -> F;
}

/// An entire function that also knows its leading Taylor coefficient at
/// the origin, `f(z) = c_λ z^λ + …`.
pub trait EntireFunction<F>: LogModulus<F> {
    /// `(λ, log|c_λ|)`; `None` for the zero function.
    fn origin_laurent(&self) -> Option<(u32, F)>;
}

fn log_abs_coeffs<F: Float>(c: &[Complex<F>], z: Complex<F>) -> F {
    if c.is_empty() {
        return F::neg_infinity();
    }
    let az = z.norm();
    if az <= F::one() {
        let v = c.iter().rev().fold(Complex::new(F::zero(), F::zero()), |acc, k| acc * z + k);
        return v.norm().ln();
    }
    // p(z) = z^d · Σ c_{d-j} w^j with w = 1/z keeps |z|^d out of range
    let w = z.inv();
    let v = c.iter().fold(Complex::new(F::zero(), F::zero()), |acc, k| acc * w + k);
    F::from(c.len() - 1).expect("degree fits") * az.ln() + v.norm().ln()
}

impl<F: Float + FloatConst + std::fmt::Debug> LogModulus<F> for Poly<Complex<F>> {
    fn log_abs(&self, z: Complex<F>) -> F {
        log_abs_coeffs(self.coeffs(), z)
    }
}

impl<F: Float + FloatConst + std::fmt::Debug> EntireFunction<F> for Poly<Complex<F>> {
    fn origin_laurent(&self) -> Option<(u32, F)> {
        self.coeffs()
            .iter()
            .enumerate()
            .find(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(k, c)| (k as u32, c.norm().ln()))
    }
}

impl<F: Float + FloatConst + std::fmt::Debug> LogModulus<F> for RationalFunction<Complex<F>> {
    fn log_abs(&self, z: Complex<F>) -> F {
        log_abs_coeffs(self.num().coeffs(), z) - log_abs_coeffs(self.den().coeffs(), z)
    }
}

/// `log|sin(x + iy)|` without overflow for large `|y|`.
pub fn log_abs_sin<F: Float>(z: Complex<F>) -> F {
    let (x, y) = (z.re, z.im.abs());
    let s = x.sin();
    let half = F::from(0.5).expect("constant");
    if y < F::one() {
        let sh = y.sinh();
        return half * (s * s + sh * sh).ln();
    }
    // log sinh y = y + log((1 - e^{-2y}) / 2)
    let two = F::one() + F::one();
    let lsh = y + ((F::one() - (-two * y).exp()) / two).ln();
    lsh + half * (s * s * (-two * lsh).exp()).ln_1p()
}

/// `c · sin π(z - s)`: zeros on the lattice `s + ℤ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineFunction<F> {
    pub scale: Complex<F>,
    pub shift: Complex<F>,
}

impl<F: Float + FloatConst> LogModulus<F> for SineFunction<F> {
    fn log_abs(&self, z: Complex<F>) -> F {
        self.scale.norm().ln() + log_abs_sin((z - self.shift) * F::PI())
    }
}

impl<F: Float + FloatConst> EntireFunction<F> for SineFunction<F> {
    fn origin_laurent(&self) -> Option<(u32, F)> {
        if self.scale.norm() == F::zero() {
            return None;
        }
        let at0 = log_abs_sin(-self.shift * F::PI());
        let ls = self.scale.norm().ln();
        if at0.is_finite() {
            Some((0, ls + at0))
        } else {
            // s is an integer: c·sin π(z - s) = ±c·π z + O(z³)
            Some((1, ls + F::PI().ln()))
        }
    }
}

/// `m(r, f) = (1/2π) ∮ log⁺|f|`.
pub fn proximity<F, L>(f: &L, r: F, quad: &CircleQuadrature<F>) -> F
where
    F: Float + FloatConst,
    L: LogModulus<F> + ?Sized,
{
    quad.mean(r, |z| f.log_abs(z).max(F::zero()))
}

/// Exact pole divisor of `f`, integrated.
pub fn pole_counting(f: &ExactRational, tol: &TolerancePolicy) -> Result<IntegratedCurve> {
    let poles = Divisor::of_poly(f.den(), tol)?;
    big_n(&poles, ChainKind::Zero, f64::INFINITY)
}

/// `T(r, f) = m(r, f) + N(r, f)`: quadrature for `m`, exact `N`.
pub fn characteristic(f: &ExactRational, r: f64, quad: &CircleQuadrature<f64>, tol: &TolerancePolicy) -> Result<f64> {
    let n = pole_counting(f, tol)?;
    Ok(characteristic_with(&to_complex_rational(f), &n, r, quad))
}

/// `T(r, f)` when the pole count is already known.
pub fn characteristic_with<F: Float + FloatConst + std::fmt::Debug>(
    f: &RationalFunction<Complex<F>>,
    poles: &IntegratedCurve,
    r: F,
    quad: &CircleQuadrature<F>,
) -> F {
    let n = F::from(poles.evaluate(r.to_f64().expect("finite radius"))).expect("finite");
    proximity(f, r, quad) + n
}

/// `T(r, P/Q) = (1/2π) ∮ log max(|P|, |Q|) - log|c_Q|`, where `c_Q` is the
/// leading Taylor coefficient of the reduced denominator at 0. Independent
/// of any divisor computation.
pub fn cartan_characteristic<F: Float + FloatConst + std::fmt::Debug>(
    f: &RationalFunction<Complex<F>>,
    r: F,
    quad: &CircleQuadrature<F>,
) -> F {
    let (p, q) = (f.num(), f.den());
    let cq = q.origin_laurent().expect("nonzero denominator").1;
    quad.mean(r, |z| p.log_abs(z).max(q.log_abs(z))) - cq
}

pub fn to_complex_rational(f: &ExactRational) -> RationalFunction<Complex<f64>> {
    RationalFunction::from_reduced(f.num().to_complex(), f.den().to_complex())
}

/// `T̃_{a_1,…,a_n}(r)`: mean of `log max_j |a_j|` minus `log u(0)`, or minus
/// `max_j log|c_{λ_j}|` when every `a_j` vanishes at the origin.
pub fn tilde_t<F: Float + FloatConst>(tuple: &[&dyn EntireFunction<F>], r: F, quad: &CircleQuadrature<F>) -> Result<F> {
    let origin = tilde_t_correction(tuple)?;
    let m = quad.mean(r, |z| {
        tuple
            .iter()
            .map(|a| a.log_abs(z))
            .fold(F::neg_infinity(), F::max)
    });
    Ok(m - origin)
}

pub fn tilde_t_correction<F: Float>(tuple: &[&dyn EntireFunction<F>]) -> Result<F> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("empty tuple".into()));
    }
    let laurent: Vec<(u32, F)> = tuple.iter().filter_map(|a| a.origin_laurent()).collect();
    if laurent.is_empty() {
        return Err(Error::InvalidArgument("every function in the tuple is identically zero".into()));
    }
    let nonvanishing: Vec<F> = laurent.iter().filter(|l| l.0 == 0).map(|l| l.1).collect();
    let pick = if nonvanishing.is_empty() { laurent.iter().map(|l| l.1).collect() } else { nonvanishing };
    Ok(pick.into_iter().fold(F::neg_infinity(), F::max))
}

/// Residual `T̃_{a,b} - T(r, a/b) - R_{a,b}` over a grid and its spread.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub residual: Vec<f64>,
    pub spread: f64,
}

impl ResidualReport {
    fn new(grid: &[f64], residual: Vec<f64>) -> Self {
        let hi = residual.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = residual.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            grid: grid.to_vec(),
            residual,
            spread: if grid.is_empty() { 0.0 } else { hi - lo },
        }
    }
}

pub fn lemma_t_check(
    a: &ExactPoly,
    b: &ExactPoly,
    grid: &[f64],
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<ResidualReport> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let f = ExactRational::new(a.clone(), b.clone())?;
    let rab = r_ab(a, b, tol)?;
    let (ac, bc) = (a.to_complex(), b.to_complex());
    let mut res = Vec::with_capacity(grid.len());
    for &r in grid {
        let tt = tilde_t(&[&ac, &bc], r, quad)?;
        let t = characteristic(&f, r, quad, tol)?;
        res.push(tt - t - rab.evaluate(r));
    }
    Ok(ResidualReport::new(grid, res))
}

/// Residual of the first main theorem in its exact form
/// `T(r, 1/g) = T(r, g) - log|c_g|`, with `g = f - a` and `c_g` the leading
/// Laurent coefficient of `g` at 0. Both characteristics are assembled as
/// `m + N`; the residual is zero up to quadrature error at every radius.
pub fn first_main_theorem_residual(
    f: &ExactRational,
    a: &GaussianRational,
    grid: &[f64],
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let g = f.sub_const(a);
    let inv = g.recip()?;
    let (num, den) = (g.num().to_complex(), g.den().to_complex());
    let log_c = num.origin_laurent().expect("nonzero").1 - den.origin_laurent().expect("nonzero").1;
    let mut res = Vec::with_capacity(grid.len());
    for &r in grid {
        res.push(characteristic(&inv, r, quad, tol)? - characteristic(&g, r, quad, tol)? + log_c);
    }
    Ok(ResidualReport::new(grid, res))
}

/// `(1/2π) ∮ log|p| - log|c_λ| - N(r, 1/p)`, zero up to quadrature error.
pub fn jensen_defect(p: &ExactPoly, r: f64, quad: &CircleQuadrature<f64>, tol: &TolerancePolicy) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pc = p.to_complex();
    let lead0 = pc.origin_laurent().expect("nonzero").1;
    let zeros = Divisor::of_poly(p, tol)?;
    let n = big_n(&zeros, ChainKind::Zero, f64::INFINITY)?;
    Ok(quad.mean(r, |z| pc.log_abs(z)) - lead0 - n.evaluate(r))
}

impl<T: Scalar> Poly<T> {
    /// Lowest nonzero coefficient and its index.
    pub fn origin_coefficient(&self) -> Option<(usize, T)> {
        self.coeffs()
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::log_grid;
    use num_complex::{Complex32, Complex64};

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    fn q() -> CircleQuadrature<f64> {
        CircleQuadrature::new(4096).unwrap()
    }

    fn t() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn rat(n: &[i64], d: &[i64]) -> ExactRational {
        ExactRational::new(p(n), p(d)).unwrap()
    }

    fn slope(f: impl Fn(f64) -> f64) -> f64 {
        (f(1e4) - f(1e2)) / (1e4f64.ln() - 1e2f64.ln())
    }

    #[test]
    fn proximity_examples() {
        let c = to_complex_rational(&rat(&[5], &[1]));
        assert!((proximity(&c, 3.0, &q()) - 5f64.ln()).abs() < 1e-12);
        let z = to_complex_rational(&rat(&[0, 1], &[1]));
        assert!((proximity(&z, 10.0, &q()) - 10f64.ln()).abs() < 1e-6);
        let inv = to_complex_rational(&rat(&[1], &[0, 1]));
        assert!(proximity(&inv, 10.0, &q()).abs() < 1e-6);
    }

    #[test]
    fn characteristic_slopes() {
        let cases = [(rat(&[1, -2, 0, 1], &[1]), 3.0), (rat(&[-1, 1], &[1, 1]), 1.0), (rat(&[7], &[1]), 0.0)];
        for (f, d) in cases {
            let s = slope(|r| characteristic(&f, r, &q(), &t()).unwrap());
            assert!((s - d).abs() < 0.01, "{f}: {s}");
        }
    }

    #[test]
    fn cartan_route_agrees() {
        let f = rat(&[1, 0, 3], &[0, -2, 0, 1]);
        let fc = to_complex_rational(&f);
        for r in [0.5, 3.0, 40.0, 1e3] {
            let a = characteristic(&f, r, &q(), &t()).unwrap();
            let b = cartan_characteristic(&fc, r, &q());
            assert!((a - b).abs() < 1e-6, "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn tilde_t_examples() {
        let five = Poly::constant(Complex64::new(5.0, 0.0));
        let three = Poly::constant(Complex64::new(3.0, 0.0));
        assert!(tilde_t::<f64>(&[&five, &three], 10.0, &q()).unwrap().abs() < 1e-12);

        let a = p(&[1, 0, 1]).to_complex();
        let b = p(&[-2]).to_complex();
        let c = p(&[-1, 0, 1]).to_complex();
        let s = slope(|r| tilde_t::<f64>(&[&a, &b, &c], r, &q()).unwrap());
        assert!((s - 2.0).abs() < 0.02);

        let z = p(&[0, 1]).to_complex();
        let z2 = p(&[0, 0, 1]).to_complex();
        assert_eq!(tilde_t_correction::<f64>(&[&z, &z2]).unwrap(), 0.0);
        let v = tilde_t::<f64>(&[&z, &z2], 1e3, &q()).unwrap();
        assert!((v - 2.0 * 1e3f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn works_in_single_precision() {
        let quad = CircleQuadrature::<f32>::new(512).unwrap();
        let f: Poly<Complex32> = Poly::new(vec![Complex32::new(1.0, 0.0), Complex32::new(0.0, 0.0), Complex32::new(1.0, 0.0)]);
        let v = tilde_t::<f32>(&[&f], 1e3, &quad).unwrap();
        assert!((v - 2.0 * 1e3f32.ln()).abs() < 1e-3);
    }

    #[test]
    fn lemma_t_examples() {
        let grid = [10.0, 100.0, 1000.0];
        for (a, b) in [(p(&[0, 0, 1]), p(&[0, 0, 0, 1])), (p(&[1, 1, 2]), p(&[-3, 0, 1])), (p(&[2, 1]), p(&[2, 1]))] {
            let rep = lemma_t_check(&a, &b, &grid, &q(), &t()).unwrap();
            assert!(rep.spread <= 0.05, "{a} / {b}: {rep:?}");
        }
    }

    #[test]
    fn jensen_and_nudging() {
        let f = p(&[-1, 0, 0, 1]);
        for r in [0.5, 2.0, 50.0] {
            assert!(jensen_defect(&f, r, &q(), &t()).unwrap().abs() < 1e-4, "r={r}");
        }
        // z = 1 sits on a node at r = 1; the nudged rule stays close
        assert!(jensen_defect(&f, 1.0, &q(), &t()).unwrap().abs() < 1e-2);
        let fc = f.to_complex();
        let plain = q().mean_at(3.0, 0.0, |z| fc.log_abs(z));
        let nudged = q().mean_at(3.0, q().nudge(), |z| fc.log_abs(z));
        assert!((plain - nudged).abs() <= 1e-6);
    }

    #[test]
    fn sine_log_modulus() {
        let s = SineFunction { scale: Complex64::new(1.0, 0.0), shift: Complex64::new(0.0, 0.0) };
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-1.7, 4.0), Complex64::new(2.2, -0.9)] {
            let direct = (z * std::f64::consts::PI).sin().norm().ln();
            assert!((s.log_abs(z) - direct).abs() < 1e-12);
        }
        assert!(s.log_abs(Complex64::new(0.1, 1e4)).is_finite());
        assert_eq!(s.origin_laurent().unwrap().0, 1);
        let h = SineFunction { scale: Complex64::new(1.0, 0.0), shift: Complex64::new(0.5, 0.0) };
        assert!(h.origin_laurent().unwrap().1.abs() < 1e-15);
    }

    #[test]
    fn first_main_theorem_residual_vanishes() {
        let f = rat(&[1, 0, 1], &[-2, 1]);
        let grid = log_grid(10.0, 1e4, 4);
        let rep = first_main_theorem_residual(&f, &GaussianRational::from_ints(3, 1), &grid, &q(), &t()).unwrap();
        assert!(rep.residual.iter().all(|x| x.abs() <= 1e-6), "{rep:?}");
    }
}
