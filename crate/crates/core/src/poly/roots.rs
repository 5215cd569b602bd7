//! Root extraction: exact Gaussian-rational roots and a simultaneous
//! (Aberth–Ehrlich) iteration for the numeric mode.

use std::fmt;

use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Scalar};
use crate::ExactPoly;

/// Tolerances for every place where floating point meets exact structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancePolicy {
    /// Two numeric roots `α, β` form a chain link iff `|α + 1 - β| <= unit_gap_eps`.
    pub unit_gap_eps: f64,
    /// Numeric roots closer than this are merged into one multiple root.
    pub root_eps: f64,
    pub quadrature_nodes: usize,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            unit_gap_eps: 1e-9,
            root_eps: 1e-9,
            quadrature_nodes: 4096,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.unit_gap_eps) {
            return Err(Error::InvalidTolerance(format!(
                "unit_gap_eps must lie in [0, 0.5), got {}",
                self.unit_gap_eps
            )));
        }
        if !(self.root_eps >= 0.0) {
            return Err(Error::InvalidTolerance(format!("root_eps must be >= 0, got {}", self.root_eps)));
        }
        if self.quadrature_nodes == 0 {
            return Err(Error::InvalidTolerance("quadrature_nodes must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootMode {
    Exact,
    Numeric,
}

/// `lead · ∏ (z - root)^mult`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPoly<T> {
    pub lead: T,
    pub roots: Vec<(T, u32)>,
    /// False when the roots are floating approximations.
    pub exact: bool,
}

pub type ApproxRoot = (Complex64, u32);
pub type NumericRoots = FactoredPoly<Complex64>;

impl<T: Scalar> FactoredPoly<T> {
    pub fn constant(lead: T) -> Self {
        Self {
            lead,
            roots: Vec::new(),
            exact: T::is_exact(),
        }
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn expand(&self) -> Poly<T> {
        let mut p = Poly::constant(self.lead.clone());
        for (r, m) in &self.roots {
            let lin = Poly::linear(r.clone());
            for _ in 0..*m {
                p = &p * &lin;
            }
        }
        p
    }

    /// Multiplicity of `w` as a root (exact comparison).
    pub fn multiplicity(&self, w: &T) -> u32 {
        self.roots.iter().filter(|(r, _)| r == w).map(|(_, m)| *m).sum()
    }
}

impl FactoredPoly<GaussianRational> {
    /// Sorts roots into a canonical order so that equal factorizations
    /// compare equal.
    pub fn canonical(mut self) -> Self {
        self.roots.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(GaussianRational, u32)> = Vec::new();
        for (r, m) in self.roots {
            match merged.last_mut() {
                Some((last, lm)) if *last == r => *lm += m,
                _ => merged.push((r, m)),
            }
        }
        self.roots = merged;
        self
    }
}

fn linear_factor_text(root: &GaussianRational) -> String {
    if root.is_zero() {
        return "z".to_string();
    }
    let neg = -root.clone();
    let txt = neg.to_string();
    if neg.is_real() && !txt.starts_with('-') {
        format!("(z+{txt})")
    } else if neg.is_real() {
        format!("(z{txt})")
    } else {
        format!("(z+({txt}))")
    }
}

impl fmt::Display for FactoredPoly<GaussianRational> {
    /// Product form such as `z^2*(z-1)*(z-2)`; the leading constant is
    /// omitted when it is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.lead.is_one() || self.roots.is_empty() {
            let l = self.lead.to_string();
            parts.push(if self.lead.is_real() && self.lead.re().is_integer() { l } else { format!("({l})") });
        }
        for (r, m) in &self.roots {
            let base = linear_factor_text(r);
            parts.push(if *m == 1 { base } else { format!("{base}^{m}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Outcome of [`roots`] in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Factorization {
    Exact(FactoredPoly<GaussianRational>),
    Numeric(NumericRoots),
}

/// Factors `p` over `ℚ(i)` (exact mode) or approximately (numeric mode).
pub fn roots(p: &ExactPoly, mode: RootMode, tol: &TolerancePolicy) -> Result<Factorization> {
    tol.validate()?;
    match mode {
        RootMode::Exact => roots_exact(p).map(Factorization::Exact),
        RootMode::Numeric => roots_numeric(p, tol).map(Factorization::Numeric),
    }
}

/// Exact factorization into Gaussian-rational linear factors.
///
/// Fails with [`Error::ExactFactorizationIncomplete`] when a factor without
/// roots in `ℚ(i)` remains.
pub fn roots_exact(p: &ExactPoly) -> Result<FactoredPoly<GaussianRational>> {
    let (fp, rest) = split_rational_roots(p)?;
    if rest.deg() > 0 {
        return Err(Error::ExactFactorizationIncomplete {
            degree: rest.deg(),
            remainder: rest.to_string(),
        });
    }
    Ok(fp)
}

/// Extracts every Gaussian-rational root of `p`. Returns the factored
/// rational part (with `lead` the leading coefficient of `p`) and the monic
/// cofactor that has no roots in `ℚ(i)`.
pub fn split_rational_roots(p: &ExactPoly) -> Result<(FactoredPoly<GaussianRational>, ExactPoly)> {
    let lead = p.lead().ok_or(Error::ZeroPolynomial)?.clone();
    let mut q = p.monic();
    let mut found: Vec<(GaussianRational, u32)> = Vec::new();

    let zeros = q.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        found.push((GaussianRational::zero(), zeros as u32));
        q = Poly::new(q.coeffs()[zeros..].to_vec());
    }

    let mut rest = ExactPoly::one();
    for (k, part) in q.square_free().into_iter().enumerate() {
        let mult = (k + 1) as u32;
        if part.is_constant() {
            continue;
        }
        let (rs, leftover) = squarefree_rational_roots(&part);
        for r in rs {
            found.push((r, mult));
        }
        for _ in 0..mult {
            rest = &rest * &leftover;
        }
    }
    Ok((
        FactoredPoly {
            lead,
            roots: found,
            exact: true,
        }
        .canonical(),
        rest,
    ))
}

/// Gaussian-rational roots of a square-free monic polynomial.
fn squarefree_rational_roots(f: &ExactPoly) -> (Vec<GaussianRational>, ExactPoly) {
    let mut rest = f.clone();
    let mut out = Vec::new();

    // Any root in lowest terms a/b has b | lc of the integer-content form,
    // so lc·root is a Gaussian integer: round the numeric estimate there.
    let lc = gaussian_lead(&rest);
    if let Ok(approx) = aberth_roots(&rest.to_complex(), 400) {
        for z in approx {
            if rest.deg() == 0 {
                break;
            }
            let cand = nearest_with_denominator(z, &lc);
            if let Some(c) = cand {
                if rest.eval(&c).is_zero() {
                    rest = rest.exact_div(&Poly::linear(c.clone())).expect("root divides");
                    out.push(c);
                }
            }
        }
    }

    if rest.deg() == 1 {
        let c = -rest.coeff(0) / rest.coeff(1);
        out.push(c);
        return (out, ExactPoly::one());
    }
    if rest.deg() > 1 {
        for c in divisor_candidates(&rest) {
            if rest.deg() == 0 {
                break;
            }
            if rest.eval(&c).is_zero() {
                rest = rest.exact_div(&Poly::linear(c.clone())).expect("root divides");
                out.push(c);
            }
        }
    }
    if rest.deg() == 1 {
        let c = -rest.coeff(0) / rest.coeff(1);
        out.push(c);
        rest = ExactPoly::one();
    }
    (out, rest.monic())
}

/// Gaussian-integer leading coefficient after clearing denominators.
fn gaussian_lead(f: &ExactPoly) -> GaussianRational {
    f.clear_denominators().lead().cloned().unwrap_or_else(GaussianRational::one)
}

fn nearest_with_denominator(z: Complex64, lc: &GaussianRational) -> Option<GaussianRational> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return None;
    }
    let scaled = z * lc.to_complex64();
    if scaled.re.abs() > 1e15 || scaled.im.abs() > 1e15 {
        return None;
    }
    let g = GaussianRational::from_ints(scaled.re.round() as i64, scaled.im.round() as i64);
    Some(g / lc.clone())
}

const DIVISOR_SEARCH_NORM_LIMIT: i128 = 1_000_000_000_000;

/// Classical rational-root candidates `p/q`, `p | a0`, `q | lc`, over the
/// Gaussian integers. Empty when the norms are too large to enumerate.
fn divisor_candidates(f: &ExactPoly) -> Vec<GaussianRational> {
    let g = f.clear_denominators();
    let to_gi = |c: &GaussianRational| -> Option<(i128, i128)> {
        let re = c.re().numer().to_i128()?;
        let im = c.im().numer().to_i128()?;
        Some((re, im))
    };
    let (Some(a0), Some(lc)) = (to_gi(&g.coeff(0)), to_gi(&g.coeff(g.deg()))) else {
        return Vec::new();
    };
    let norm = |(a, b): (i128, i128)| a * a + b * b;
    if norm(a0) == 0 || norm(a0) > DIVISOR_SEARCH_NORM_LIMIT || norm(lc) > DIVISOR_SEARCH_NORM_LIMIT {
        return Vec::new();
    }
    let nums = gaussian_divisors(a0);
    let dens = gaussian_divisors(lc);
    let mut out = Vec::new();
    for &(pr, pi) in &nums {
        for &(qr, qi) in &dens {
            let c = GaussianRational::from_ints(pr as i64, pi as i64)
                / GaussianRational::from_ints(qr as i64, qi as i64);
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All Gaussian-integer divisors of `g` (all four associates included).
fn gaussian_divisors(g: (i128, i128)) -> Vec<(i128, i128)> {
    let n = g.0 * g.0 + g.1 * g.1;
    let mut out = Vec::new();
    let mut d = 1i128;
    while d * d <= n {
        if n % d == 0 {
            for m in [d, n / d] {
                for (a, b) in gaussian_with_norm(m) {
                    // (a+bi) | g  iff  g * conj(a+bi) / m is integral
                    let re = g.0 * a + g.1 * b;
                    let im = g.1 * a - g.0 * b;
                    if re % m == 0 && im % m == 0 {
                        out.push((a, b));
                    }
                }
            }
        }
        d += 1;
        if d > 2_000_000 {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn gaussian_with_norm(m: i128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let mut a = 0i128;
    while a * a <= m {
        let rest = m - a * a;
        let b = (rest as f64).sqrt().round() as i128;
        for b in [b - 1, b, b + 1] {
            if b >= 0 && b * b == rest {
                for (x, y) in [(a, b), (-a, b), (a, -b), (-a, -b)] {
                    out.push((x, y));
                }
            }
        }
        a += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Numeric factorization: square-free split done exactly, Aberth iteration
/// on each part, then clustering of roots closer than `root_eps`.
pub fn roots_numeric(p: &ExactPoly, tol: &TolerancePolicy) -> Result<NumericRoots> {
    let lead = p.lead().ok_or(Error::ZeroPolynomial)?.to_complex64();
    let mut found: Vec<ApproxRoot> = Vec::new();
    let q = p.monic();
    let zeros = q.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        found.push((Complex64::new(0.0, 0.0), zeros as u32));
    }
    let q = Poly::new(q.coeffs()[zeros..].to_vec());
    for (k, part) in q.square_free().into_iter().enumerate() {
        if part.is_constant() {
            continue;
        }
        for z in aberth_roots(&part.to_complex(), 500)? {
            found.push((z, (k + 1) as u32));
        }
    }
    Ok(FactoredPoly {
        lead,
        roots: cluster(found, tol.root_eps),
        exact: false,
    })
}

fn cluster(mut roots: Vec<ApproxRoot>, eps: f64) -> Vec<ApproxRoot> {
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut out: Vec<ApproxRoot> = Vec::new();
    for (z, m) in roots {
        if let Some(slot) = out.iter_mut().find(|(w, _)| (*w - z).norm() <= eps) {
            let total = slot.1 + m;
            slot.0 = (slot.0 * slot.1 as f64 + z * m as f64) / total as f64;
            slot.1 = total;
        } else {
            out.push((z, m));
        }
    }
    out
}

/// All roots of `p` by the Aberth–Ehrlich simultaneous iteration.
///
/// Roots of multiplicity > 1 converge slowly; callers pass square-free input.
pub fn aberth_roots<F>(p: &Poly<Complex<F>>, max_iterations: usize) -> Result<Vec<Complex<F>>>
where
    F: Float + FloatConst + fmt::Debug,
{
    let n = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    let lead = *p.lead().expect("nonzero");
    let coeffs: Vec<Complex<F>> = p.coeffs().iter().map(|c| *c / lead).collect();
    if n == 1 {
        return Ok(vec![-coeffs[0]]);
    }
    let deriv: Vec<Complex<F>> = (1..=n)
        .map(|k| coeffs[k] * F::from(k).expect("small integer"))
        .collect();
    let horner = |c: &[Complex<F>], z: Complex<F>| {
        c.iter().rev().fold(Complex::new(F::zero(), F::zero()), |acc, a| acc * z + *a)
    };

    let nf = F::from(n).expect("degree fits");
    let a0 = coeffs[0].norm();
    let mut radius = if a0 > F::zero() { a0.powf(F::one() / nf) } else { F::one() };
    let bound = F::one() + coeffs[..n].iter().fold(F::zero(), |m, c| m.max(c.norm()));
    if radius > bound {
        radius = bound;
    }
    let offset = F::from(0.4).expect("constant");
    let two_pi = F::TAU();
    let mut z: Vec<Complex<F>> = (0..n)
        .map(|k| {
            let t = two_pi * F::from(k).expect("index") / nf + offset;
            Complex::from_polar(radius, t)
        })
        .collect();

    let tiny = F::epsilon() * F::from(8.0).expect("constant");
    for _ in 0..max_iterations {
        let mut max_step = F::zero();
        for i in 0..n {
            let pz = horner(&coeffs, z[i]);
            if pz.norm() == F::zero() {
                continue;
            }
            let dz = horner(&deriv, z[i]);
            let ratio = pz / dz;
            let mut sum = Complex::new(F::zero(), F::zero());
            for j in 0..n {
                if j != i {
                    sum = sum + (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex::new(F::one(), F::zero()) - ratio * sum);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i] - w;
                let rel = w.norm() / (F::one() + z[i].norm());
                if rel > max_step {
                    max_step = rel;
                }
            }
        }
        if max_step <= tiny {
            // Two Newton polishing steps.
            for zi in z.iter_mut() {
                for _ in 0..2 {
                    let dz = horner(&deriv, *zi);
                    if dz.norm() > F::zero() {
                        let step = horner(&coeffs, *zi) / dz;
                        if step.re.is_finite() && step.im.is_finite() {
                            *zi = *zi - step;
                        }
                    }
                }
            }
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
    })
}

impl<T: Scalar> FactoredPoly<T> {
    pub fn lead_one(roots: Vec<(T, u32)>) -> Self {
        Self {
            lead: T::one(),
            roots,
            exact: T::is_exact(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn exact_examples() {
        let f = roots_exact(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f.lead, g(1, 0));
        assert_eq!(f.roots, vec![(g(-1, 0), 1), (g(1, 0), 1)]);

        // z^2 (z-1)^3 (z-2)^4
        let mut w = ExactPoly::monomial(2);
        for _ in 0..3 {
            w = &w * &p(&[-1, 1]);
        }
        for _ in 0..4 {
            w = &w * &p(&[-2, 1]);
        }
        let f = roots_exact(&w).unwrap();
        assert_eq!(f.roots, vec![(g(0, 0), 2), (g(1, 0), 3), (g(2, 0), 4)]);

        let f = roots_exact(&p(&[1, 0, 1])).unwrap();
        assert_eq!(f.roots, vec![(g(0, -1), 1), (g(0, 1), 1)]);
    }

    #[test]
    fn exact_rational_roots_with_denominators() {
        // (2z - 1)(3z + i)
        let a = ExactPoly::new(vec![g(-1, 0), g(2, 0)]);
        let b = ExactPoly::new(vec![g(0, 1), g(3, 0)]);
        let f = roots_exact(&(&a * &b)).unwrap();
        assert_eq!(f.expand(), &a * &b);
        assert_eq!(f.multiplicity(&GaussianRational::ratio(1, 2)), 1);
    }

    #[test]
    fn exact_mode_rejects_irrational_factor() {
        let err = roots_exact(&p(&[-2, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::ExactFactorizationIncomplete { degree: 2, .. }));
        let (part, rest) = split_rational_roots(&(&p(&[-2, 0, 1]) * &p(&[-3, 1]))).unwrap();
        assert_eq!(part.roots, vec![(g(3, 0), 1)]);
        assert_eq!(rest, p(&[-2, 0, 1]));
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(roots_exact(&ExactPoly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn numeric_mode_clusters_multiple_roots() {
        // (z^2 - 2)^2 (z - i)
        let base = p(&[-2, 0, 1]);
        let f = &(&base * &base) * &ExactPoly::linear(GaussianRational::i());
        let r = roots_numeric(&f, &TolerancePolicy::default()).unwrap();
        assert!(!r.exact);
        assert_eq!(r.degree(), 5);
        let s2 = 2f64.sqrt();
        for target in [Complex64::new(s2, 0.0), Complex64::new(-s2, 0.0)] {
            let hit = r.roots.iter().find(|(z, _)| (*z - target).norm() < 1e-12).unwrap();
            assert_eq!(hit.1, 2);
        }
    }

    #[test]
    fn aberth_on_f32() {
        let q: Poly<Complex<f32>> = Poly::from_ints(&[-6, 11, -6, 1]);
        let mut rs: Vec<f32> = aberth_roots(&q, 200).unwrap().iter().map(|z| z.re).collect();
        rs.sort_by(f32::total_cmp);
        for (r, e) in rs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - e).abs() < 1e-4);
        }
    }

    #[test]
    fn policy_validation() {
        let mut t = TolerancePolicy::default();
        assert!(t.validate().is_ok());
        t.unit_gap_eps = 0.5;
        assert!(t.validate().is_err());
    }

    #[test]
    fn factored_display() {
        let f = FactoredPoly::lead_one(vec![(g(0, 0), 2), (g(1, 0), 1), (g(2, 0), 1)]);
        assert_eq!(f.to_string(), "z^2*(z-1)*(z-2)");
        let f = FactoredPoly::lead_one(vec![(g(-1, 1), 1)]);
        assert_eq!(f.to_string(), "(z+(1-i))");
    }
}
