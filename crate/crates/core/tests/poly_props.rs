mod common;

use common::*;
use diffnev_core::poly::{roots, Factorization, RootMode};
use diffnev_core::{ExactPoly, GaussianRational, TolerancePolicy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn newton_round_trip(p in poly(12, 9)) {
        prop_assert_eq!(ExactPoly::from_newton(&p.to_newton()), p);
    }

    #[test]
    fn delta_is_linear_and_lowers_degree(p in poly(8, 5), q in poly(8, 5)) {
        prop_assert_eq!((&p + &q).delta(1), &p.delta(1) + &q.delta(1));
        if !p.is_constant() {
            prop_assert_eq!(p.delta(1).deg(), p.deg() - 1);
        } else {
            prop_assert!(p.delta(1).is_zero());
        }
    }

    #[test]
    fn newton_coefficients_of_delta(p in poly(10, 5)) {
        // Δ z^{n↓} = n z^{(n-1)↓}
        let c = p.to_newton();
        let want: Vec<GaussianRational> = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, cn)| cn.clone() * GaussianRational::from_ints(n as i64, 0))
            .collect();
        prop_assert_eq!(ExactPoly::from_newton(&want), p.delta(1));
        let got = p.delta(1).to_newton();
        prop_assert_eq!(ExactPoly::from_newton(&got), ExactPoly::from_newton(&want));
    }

    #[test]
    fn falling_expression_splits(p in poly(3, 4), m in 1usize..4, n in 1usize..3) {
        let lhs = p.fall_expr(m + n);
        let rhs = &p.fall_expr(m) * &p.shift_int(-(m as i64)).fall_expr(n);
        prop_assert_eq!(lhs.clone(), rhs);
        if !p.is_zero() {
            prop_assert_eq!(lhs.deg(), (m + n) * p.deg());
        }
    }

    #[test]
    fn exact_roots_expand_back(p in rooted_poly(6, 4), q in nonconstant_poly(3, 3)) {
        let tol = TolerancePolicy::default();
        match roots(&p, RootMode::Exact, &tol).unwrap() {
            Factorization::Exact(f) => prop_assert_eq!(f.expand(), p),
            other => prop_assert!(false, "{other:?}"),
        }
        // arbitrary input: either an exact factorization that expands back,
        // or a reported irreducible remainder
        if let Ok(Factorization::Exact(f)) = roots(&q, RootMode::Exact, &tol) {
            prop_assert_eq!(f.expand(), q);
        }
    }

    #[test]
    fn shift_composes(p in poly(6, 5), a in -4i64..4, b in -4i64..4) {
        prop_assert_eq!(p.shift_int(a).shift_int(b), p.shift_int(a + b));
    }
}

#[test]
fn falling_factorial_examples() {
    let z = ExactPoly::z();
    assert_eq!(z.fall_expr(3), ExactPoly::from_ints(&[0, 2, -3, 1]));
    let z2 = ExactPoly::from_ints(&[0, 0, 1]);
    assert_eq!(z2.fall_expr(2), &z2 * &z2.shift_int(-1));
}
