//! Rational functions `num / den` kept in lowest terms with a monic
//! denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, PartialEq)]
pub struct RationalFunction<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Reduces `num / den`. Fails when `den` is the zero polynomial.
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let l = den.lead().expect("nonzero").clone();
        let inv = T::one() / l;
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    /// Takes `num / den` as already reduced, e.g. the image of an exact
    /// reduced function under a coefficient map.
    pub fn from_reduced(num: Poly<T>, den: Poly<T>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `max(deg num, deg den)`, the growth exponent of `T(r, f)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// `None` at a pole.
    pub fn eval(&self, z: &T) -> Option<T> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    pub fn shift(&self, c: &T) -> Self {
        Self {
            num: self.num.shift(c),
            den: self.den.shift(c),
        }
    }

    /// `Δⁿf`, reduced after every step.
    pub fn delta(&self, n: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..n {
            if f.is_zero() {
                break;
            }
            f = &f.shift(&T::one()) - &f;
        }
        f
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn sub_const(&self, a: &T) -> Self {
        self - &Self::constant(a.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<'a, T: Scalar> Add<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn add(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero den")
    }
}

impl<'a, T: Scalar> Sub<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn sub(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Scalar> Mul<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn mul(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl<'a, T: Scalar> Div<&'a RationalFunction<T>> for &'a RationalFunction<T> {
    type Output = RationalFunction<T>;
    /// Panics on division by the zero function; see [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction<T>) -> RationalFunction<T> {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl<T: Scalar> Neg for &RationalFunction<T> {
    type Output = RationalFunction<T>;
    fn neg(self) -> RationalFunction<T> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<T: Scalar> From<Poly<T>> for RationalFunction<T> {
    fn from(p: Poly<T>) -> Self {
        Self::from_poly(p)
    }
}

impl<T: Scalar> fmt::Debug for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<T: Scalar> Poly<T> {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactPoly, ExactRational};
    use num_traits::{One, Zero};

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    #[test]
    fn reduces_common_factors() {
        let f = ExactRational::new(p(&[0, -1, 1]), p(&[0, 2])).unwrap();
        assert_eq!(f.num(), &p(&[-1, 1]).scale(&GaussianRational::ratio(1, 2)));
        assert_eq!(f.den(), &ExactPoly::one());
        assert!(ExactRational::new(p(&[1]), ExactPoly::zero()).is_err());
    }

    #[test]
    fn delta_of_reciprocal_quadratic() {
        // Δ 1/(z^2+2z) = -(2z+3) / (z(z+1)(z+2)(z+3))
        let g = ExactRational::new(p(&[1]), p(&[0, 2, 1])).unwrap();
        let d = g.delta(1);
        let den = ExactPoly::falling_monomial(&GaussianRational::from_ints(-3, 0), 4);
        assert_eq!(d, ExactRational::new(p(&[-3, -2]), den).unwrap());
    }

    #[test]
    fn delta_of_falling_negative_power() {
        // f = (2z+1)/(z(z+1)), Δf = -2/(z^2+2z)
        let f = ExactRational::new(p(&[1, 2]), p(&[0, 1, 1])).unwrap();
        assert_eq!(f.delta(1), ExactRational::new(p(&[-2]), p(&[0, 2, 1])).unwrap());
    }

    #[test]
    fn field_operations() {
        let f = ExactRational::new(p(&[1]), p(&[0, 1])).unwrap();
        let g = ExactRational::from_poly(p(&[0, 1]));
        assert_eq!(&f * &g, ExactRational::constant(GaussianRational::one()));
        assert_eq!(&(&f + &g) - &g, f);
        assert_eq!(&f / &f, ExactRational::constant(GaussianRational::one()));
        assert_eq!(f.eval(&GaussianRational::zero()), None);
    }
}
