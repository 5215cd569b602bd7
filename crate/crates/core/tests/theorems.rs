mod common;

use common::*;
use diffnev_core::divisor::{ChainKind, Divisor};
use diffnev_core::nevanlinna::CircleQuadrature;
use diffnev_core::theorems::*;
use diffnev_core::{Error, ExactPoly, ExactRational, GaussianRational, TolerancePolicy};
use num_complex::Complex64;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn eval_c(p: &ExactPoly, z: Complex64) -> Complex64 {
    p.to_complex().coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[test]
fn abc_corpus_holds_against_an_independent_count() {
    let corpus = admissible_abc_corpus(200, 20240601, &tol());
    assert_eq!(corpus.len(), 200);
    for (a, b, c) in &corpus {
        assert_eq!(&(a + b), c);
        let rep = verify_poly_abc(a, b, c, &tol()).unwrap();
        let abc = [a, b, c]
            .iter()
            .map(|p| Divisor::of_poly(p, &tol()).unwrap())
            .fold(Divisor::new(), |acc, d| acc.product(&d));
        let chains = chain_count_oracle(&abc, abc.covering_radius(), ChainKind::Zero) as f64;
        assert_eq!(rep.rhs, vec![chains - 1.0]);
        assert!(rep.holds(), "{rep:?}");
        assert!(rep.preconditions.iter().all(|p| p.holds));
    }
}

#[test]
fn reports_never_hold_with_a_failed_precondition() {
    // the sine triple has order 1: the report embeds the failed hypothesis
    let q = CircleQuadrature::new(2048).unwrap();
    let opts = EntireAbcOptions { grid: vec![10.0, 100.0], ..Default::default() };
    let rep = verify_entire_abc(&AbcInput::SineCounterexample, &opts, &q, &tol()).unwrap();
    let order = rep.preconditions.iter().find(|p| p.name == "order less than 1").unwrap();
    assert!(!order.holds && order.witness.is_some());
    assert_ne!(rep.verdict, Verdict::Holds);
    // a permissive epsilon still cannot make it hold
    let loose = EntireAbcOptions { epsilon: 1e6, ..opts };
    let rep = verify_entire_abc(&AbcInput::SineCounterexample, &loose, &q, &tol()).unwrap();
    assert_eq!(rep.verdict, Verdict::Inconclusive);
}

#[test]
fn gate_reports_the_witness() {
    let a = ExactPoly::from_ints(&[0, 1]);
    let b = ExactPoly::from_ints(&[1, -1]);
    match verify_poly_abc(&a, &b, &ExactPoly::one(), &tol()) {
        Err(Error::PreconditionFailed { which, witness }) => {
            assert_eq!(which, "pairwise relatively shifting prime");
            assert!(witness.unwrap().contains("(0, 1)"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn smt_slopes_for_reciprocal_falling_factorials() {
    let q = CircleQuadrature::new(4096).unwrap();
    let vals = [
        diffnev_core::counting::Value::Finite(GaussianRational::ratio(7, 3)),
        diffnev_core::counting::Value::Finite(GaussianRational::from_ints(-2, 1)),
    ];
    for m in 1..=3usize {
        let f = ExactRational::new(ExactPoly::one(), ExactPoly::z().fall_expr(m)).unwrap();
        let rep = smt_report(&f, &vals, &[10.0, 1e4], &q, &tol()).unwrap();
        assert_eq!(rep.slope_margin, 1 + m as i64);
        assert!((rep.finite_difference_slope - (1 + m) as f64).abs() <= 0.02, "{rep:?}");
    }
}

#[test]
fn fermat_search_is_deterministic_under_permutation() {
    let b = FermatBounds { max_degree: 1, coeff_bound: 2, limit: None, shuffle_seed: None };
    for n in [2, 3] {
        let first = fermat_search(&b, n, &tol()).unwrap();
        let again = fermat_search(&b, n, &tol()).unwrap();
        assert_eq!(first, again);
        for seed in [1, 2, 3] {
            let perm = fermat_search(&FermatBounds { shuffle_seed: Some(seed), ..b.clone() }, n, &tol()).unwrap();
            assert_eq!(perm.instances, first.instances);
            assert_eq!(perm.identity_hits, first.identity_hits);
        }
    }
}

#[test]
fn n2_instances_satisfy_the_identity_numerically() {
    let b = FermatBounds { max_degree: 1, coeff_bound: 2, limit: None, shuffle_seed: None };
    let found = fermat_search(&b, 2, &tol()).unwrap();
    for inst in &found.instances {
        assert_eq!(inst.n, 2);
    }
    // a^{2↓} = 8i z²(z²-1), b^{2↓} = -2i((1-2z²)² - 4z²), c^{2↓} = 2i(4z²-1)
    let a = ExactPoly::new(vec![GaussianRational::from_ints(0, 0), GaussianRational::from_ints(-2, -2), GaussianRational::from_ints(-2, -2)]);
    let bb = ExactPoly::new(vec![GaussianRational::from_ints(1, -1), GaussianRational::from_ints(-2, 2), GaussianRational::from_ints(-2, 2)]);
    let c = ExactPoly::new(vec![GaussianRational::from_ints(-1, -1), GaussianRational::from_ints(-2, -2)]);
    for z in [Complex64::new(0.3, 0.7), Complex64::new(-4.1, 2.2), Complex64::new(11.0, -3.0)] {
        let fall = |p: &ExactPoly| eval_c(p, z) * eval_c(p, z - 1.0);
        let resid = fall(&a) + fall(&bb) - fall(&c);
        assert!(resid.norm() <= 1e-9 * (1.0 + fall(&c).norm()), "{resid}");
    }
    assert_eq!(fermat_check(&a, &bb, &c, 2, &tol()).unwrap(), FermatVerdict::Valid);
}

#[test]
fn long_values_of_a_polynomial_corpus() {
    let corpus = admissible_abc_corpus(50, 5, &tol());
    for (a, _, _) in corpus {
        let f = ExactRational::from_poly(a);
        let cands = long_value_candidates(&f).unwrap();
        assert!(complete_long_values(&f, &cands, &tol()).unwrap().len() <= 2);
    }
}
