//! Dense univariate polynomials, the forward difference operator and
//! falling-factorial calculus.

mod roots;

pub use roots::{
    aberth_roots, roots, roots_exact, roots_numeric, split_rational_roots, ApproxRoot,
    FactoredPoly, Factorization, NumericRoots, RootMode, TolerancePolicy,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{GaussianRational, Scalar};

/// Polynomial with coefficients stored lowest degree first.
///
/// The zero polynomial is the empty coefficient list; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = T::one();
        Self { coeffs: c }
    }

    /// `z - a`.
    pub fn linear(a: T) -> Self {
        Self::new(vec![-a, T::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| T::from_int(k)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    /// `p(z + c)`, by Horner composition with `z + c`.
    pub fn shift(&self, c: &T) -> Self {
        if c.is_zero() || self.is_constant() {
            return self.clone();
        }
        let step = Self::new(vec![c.clone(), T::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * &step) + &Self::constant(a.clone()))
    }

    pub fn shift_int(&self, k: i64) -> Self {
        self.shift(&T::from_int(k))
    }

    /// The `n`-th forward difference `Δⁿp`, with `Δp(z) = p(z+1) - p(z)`.
    pub fn delta(&self, n: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = &p.shift_int(1) - &p;
        }
        p
    }

    /// Falling expression `p(z) p(z-1) ⋯ p(z-n+1)`.
    pub fn fall_expr(&self, n: usize) -> Self {
        assert!(n >= 1, "falling expression needs n >= 1");
        (1..n).fold(self.clone(), |acc, k| &acc * &self.shift_int(-(k as i64)))
    }

    /// `(z - a)^{n↓} = (z-a)(z-a-1)⋯(z-a-n+1)`.
    pub fn falling_monomial(a: &T, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, k| {
            &acc * &Self::linear(a.clone() + T::from_int(k as i64))
        })
    }

    /// `(z - a)^{-n↓} = 1/((z-a)(z-a+1)⋯(z-a+n-1))`, returned as the
    /// denominator polynomial.
    pub fn rising_denominator(a: &T, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, k| {
            &acc * &Self::linear(a.clone() - T::from_int(k as i64))
        })
    }

    /// Coefficients over the falling monomials `z^{k↓}`, lowest first.
    ///
    /// Uses the Stirling triangle of the second kind: `z^n = Σ S(n,k) z^{k↓}`.
    pub fn to_newton(&self) -> Vec<T> {
        let n = self.coeffs.len();
        let s2 = stirling_second::<T>(n);
        let mut out = vec![T::zero(); n];
        for (m, c) in self.coeffs.iter().enumerate() {
            for k in 0..=m {
                if !s2[m][k].is_zero() {
                    out[k] = out[k].clone() + c.clone() * s2[m][k].clone();
                }
            }
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Inverse of [`Poly::to_newton`], using signed Stirling numbers of the
    /// first kind: `z^{n↓} = Σ s(n,k) z^k`.
    pub fn from_newton(newton: &[T]) -> Self {
        let n = newton.len();
        let s1 = stirling_first_signed::<T>(n);
        let mut out = vec![T::zero(); n];
        for (m, c) in newton.iter().enumerate() {
            for k in 0..=m {
                if !s1[m][k].is_zero() {
                    out[k] = out[k].clone() + c.clone() * s1[m][k].clone();
                }
            }
        }
        Self::new(out)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by the zero polynomial").clone();
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![T::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = rem[k + dd].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    /// Quotient when `d` is known to divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    ///
    /// Exact for [`GaussianRational`] coefficients; for floating
    /// coefficients the result is only as good as the remainders.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns `(f_1, f_2, ...)` with
    /// `self = c · f_1 f_2² f_3³ ⋯`, each `f_k` monic and square-free.
    pub fn square_free(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        let a = self.gcd(&d);
        let mut b = self.exact_div(&a).expect("gcd divides");
        let c = d.exact_div(&a).expect("gcd divides derivative");
        let mut e = &c - &b.derivative();
        while !b.is_constant() {
            let g = b.gcd(&e);
            b = b.exact_div(&g).expect("gcd divides");
            let c = e.exact_div(&g).expect("gcd divides");
            e = &c - &b.derivative();
            out.push(g);
        }
        while out.last().is_some_and(|p| p.is_constant()) {
            out.pop();
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

fn stirling_second<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let mut s = vec![vec![T::zero(); n.max(1)]; n.max(1)];
    if n == 0 {
        return s;
    }
    s[0][0] = T::one();
    for m in 1..n {
        for k in 1..=m {
            s[m][k] = T::from_int(k as i64) * s[m - 1][k].clone() + s[m - 1][k - 1].clone();
        }
    }
    s
}

fn stirling_first_signed<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let mut s = vec![vec![T::zero(); n.max(1)]; n.max(1)];
    if n == 0 {
        return s;
    }
    s[0][0] = T::one();
    for m in 1..n {
        for k in 1..=m {
            s[m][k] = s[m - 1][k - 1].clone() - T::from_int((m - 1) as i64) * s[m - 1][k].clone();
        }
    }
    s
}

impl<'a, T: Scalar> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly<GaussianRational> {
    /// Common denominator times `self`: a polynomial with Gaussian-integer
    /// coefficients.
    pub fn clear_denominators(&self) -> Self {
        let l = self
            .coeffs
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, &c.denom_lcm()));
        Self::new(self.coeffs.iter().map(|c| c.scale_int(&l)).collect())
    }

    pub fn to_complex(&self) -> Poly<num_complex::Complex64> {
        self.map(|c| c.to_complex64())
    }
}

/// Writes a coefficient so that the result reparses as a factor.
fn coeff_factor(c: &GaussianRational) -> String {
    let s = c.to_string();
    if c.is_real() && c.re().is_integer() {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for Poly<GaussianRational> {
    /// Expanded form, highest degree first, e.g. `z^2-2*z+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative_real = c.is_real() && num_traits::Signed::is_negative(c.re());
            let mag = if negative_real { -c.clone() } else { c.clone() };
            if negative_real {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{}", coeff_factor(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", coeff_factor(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactPoly;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 0, 1]) + &p(&[-2]), p(&[-1, 0, 1]));
        assert_eq!(&ExactPoly::z() * &p(&[-1, 1]), p(&[0, -1, 1]));
        let cube = (0..3).fold(ExactPoly::one(), |acc, _| &acc * &p(&[-1, 1]));
        assert_eq!(&ExactPoly::monomial(2) * &cube, p(&[0, 0, -1, 3, -3, 1]));
    }

    #[test]
    fn shift_examples() {
        let one = GaussianRational::from_ints(1, 0);
        assert_eq!(p(&[0, 0, 1]).shift(&one), p(&[1, 2, 1]));
        assert_eq!(p(&[5]).shift(&GaussianRational::from_ints(3, 7)), p(&[5]));
        assert_eq!(p(&[0, -1, 0, 1]).shift_int(-1), p(&[0, 2, -3, 1]));
    }

    #[test]
    fn delta_examples() {
        assert!(p(&[7]).delta(1).is_zero());
        let zero = GaussianRational::zero();
        let f3 = ExactPoly::falling_monomial(&zero, 3);
        let f2 = ExactPoly::falling_monomial(&zero, 2);
        assert_eq!(f3.delta(1), f2.scale(&GaussianRational::from_ints(3, 0)));
        assert_eq!(p(&[0, 0, 1]).delta(2), p(&[2]));
        assert_eq!(p(&[0, 0, 1]).delta(0), p(&[0, 0, 1]));
    }

    #[test]
    fn fall_expr_examples() {
        assert_eq!(ExactPoly::z().fall_expr(3), p(&[0, 2, -3, 1]));
        let a = GaussianRational::from_ints(2, 1);
        assert_eq!(ExactPoly::linear(a.clone()).fall_expr(1), ExactPoly::linear(a));
        let sq = p(&[0, 0, 1]);
        assert_eq!(sq.fall_expr(2), &sq * &p(&[1, -2, 1]));
    }

    #[test]
    fn newton_examples() {
        let one = GaussianRational::one();
        assert_eq!(p(&[0, 0, 1]).to_newton(), vec![GaussianRational::zero(), one.clone(), one.clone()]);
        let three = GaussianRational::from_ints(3, 0);
        assert_eq!(
            p(&[0, 0, 0, 1]).to_newton(),
            vec![GaussianRational::zero(), one.clone(), three, one.clone()]
        );
        let c = GaussianRational::from_ints(4, -1);
        assert_eq!(ExactPoly::constant(c.clone()).to_newton(), vec![c]);
        assert!(ExactPoly::zero().to_newton().is_empty());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[0, 0, 1]).gcd(&ExactPoly::z()), ExactPoly::z());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, -1, 1]).gcd(&p(&[6, -5, 1])), ExactPoly::one());
        assert_eq!(p(&[0, 2]).gcd(&ExactPoly::zero()), ExactPoly::z());
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // z^2 (z-1)^3 (z-2)
        let f = &(&p(&[0, 0, 1]) * &p(&[-1, 3, -3, 1])) * &p(&[-2, 1]);
        let parts = f.square_free();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], p(&[-2, 1]));
        assert_eq!(parts[1], ExactPoly::z());
        assert_eq!(parts[2], p(&[-1, 1]));
    }

    #[test]
    fn display_reads_back_naturally() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "z^2-2*z+1");
        assert_eq!(p(&[-2]).to_string(), "-2");
        let q = ExactPoly::new(vec![GaussianRational::i(), GaussianRational::ratio(1, 2)]);
        assert_eq!(q.to_string(), "(1/2)*z+(i)");
    }
}
