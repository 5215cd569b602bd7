#![allow(dead_code)]

use std::collections::BTreeMap;

use diffnev_core::divisor::{ChainKind, Divisor, DivisorPoint};
use diffnev_core::{ExactPoly, ExactRational, GaussianRational};
use proptest::prelude::*;

pub fn gi(span: i64) -> impl Strategy<Value = GaussianRational> {
    (-span..=span, -span..=span).prop_map(|(a, b)| GaussianRational::from_ints(a, b))
}

/// Polynomial with Gaussian-integer coefficients, not necessarily nonzero.
pub fn poly(max_deg: usize, span: i64) -> impl Strategy<Value = ExactPoly> {
    prop::collection::vec(gi(span), 1..=max_deg + 1).prop_map(ExactPoly::new)
}

pub fn nonconstant_poly(max_deg: usize, span: i64) -> impl Strategy<Value = ExactPoly> {
    poly(max_deg, span).prop_filter("nonconstant", |p| !p.is_constant())
}

/// `lead · ∏ (z - w)` over Gaussian-integer roots in a box.
pub fn rooted_poly(max_deg: usize, span: i64) -> impl Strategy<Value = ExactPoly> {
    (
        prop::collection::vec(gi(span), 0..=max_deg),
        gi(2).prop_filter("nonzero", |c| c != &GaussianRational::from_ints(0, 0)),
    )
        .prop_map(|(roots, lead)| {
            roots
                .into_iter()
                .fold(ExactPoly::constant(lead), |acc, w| &acc * &ExactPoly::linear(w))
        })
}

pub fn rational(max_deg: usize, span: i64) -> impl Strategy<Value = ExactRational> {
    (rooted_poly(max_deg, span), rooted_poly(max_deg, span))
        .prop_filter_map("nonzero denominator", |(n, d)| ExactRational::new(n, d).ok())
}

/// Zeros and poles with multiplicities 1..=3 on a small box of Gaussian
/// integers and half-integers.
pub fn divisor() -> impl Strategy<Value = Divisor> {
    prop::collection::vec(((-6i64..=6, -3i64..=3, 0u8..2), 1u32..=3, any::<bool>()), 0..25).prop_map(|pts| {
        Divisor::from_points(pts.into_iter().map(|((re, im, half), m, zero)| {
            let at = GaussianRational::from_ints(re, im).add_real_half(half == 1);
            if zero {
                DivisorPoint::zero(at, m)
            } else {
                DivisorPoint::pole(at, m)
            }
        }))
    })
}

trait HalfShift {
    fn add_real_half(self, yes: bool) -> Self;
}

impl HalfShift for GaussianRational {
    fn add_real_half(self, yes: bool) -> Self {
        if yes {
            self + GaussianRational::ratio(1, 2)
        } else {
            self
        }
    }
}

/// Chain count straight from multiplicities: a point starts
/// `m(w) - m(w - step)` chains when that is positive, with `m` restricted to
/// the disc.
pub fn chain_count_oracle(d: &Divisor, r: f64, kind: ChainKind) -> u64 {
    let r2 = r * r;
    let inside = |w: &GaussianRational| {
        let (x, y) = (w.re_f64(), w.im_f64());
        x * x + y * y <= r2 * (1.0 + 1e-12)
    };
    let m: BTreeMap<GaussianRational, u32> = d
        .iter()
        .filter(|p| p.mult(kind) > 0 && inside(&p.at))
        .map(|p| {
            let k = p.mult(kind);
            (p.at, k)
        })
        .collect();
    let step = match kind {
        ChainKind::Zero => 1,
        ChainKind::Pole => -1,
    };
    m.iter()
        .map(|(w, k)| {
            let prev = m.get(&w.add_int(-step)).copied().unwrap_or(0);
            k.saturating_sub(prev) as u64
        })
        .sum()
}

pub trait F64Parts {
    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;
}

impl F64Parts for GaussianRational {
    fn re_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self.re()).unwrap()
    }
    fn im_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self.im()).unwrap()
    }
}
