//! Exact difference calculus over the Gaussian rationals.
//!
//! The crate computes falling-factorial chain decompositions of zero and
//! pole divisors, difference radicals, difference counting functions and
//! their integrated forms, Casorati determinants, circle-quadrature
//! Nevanlinna characteristics, and margin reports for the difference
//! analogues of the Stothers–Mason inequality and the truncated second
//! main theorem.

pub mod casorati;
pub mod counting;
pub mod divisor;
pub mod error;
pub mod nevanlinna;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod theorems;

pub use error::{Error, Result};
pub use poly::{FactoredPoly, Poly, TolerancePolicy};
pub use rational::RationalFunction;
pub use scalar::{GaussianRational, Scalar};

/// Polynomial over the Gaussian rationals.
pub type ExactPoly = Poly<GaussianRational>;
/// Polynomial with double-precision complex coefficients.
pub type ComplexPoly = Poly<num_complex::Complex64>;
/// Polynomial with single-precision complex coefficients.
pub type ComplexPoly32 = Poly<num_complex::Complex32>;
/// Rational function over the Gaussian rationals.
pub type ExactRational = RationalFunction<GaussianRational>;
