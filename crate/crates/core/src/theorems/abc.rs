use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gate, inputs, MarginReport, Precondition};
use crate::casorati::linearly_independent;
use crate::counting::{big_n_bar_delta, n_bar_delta};
use crate::divisor::{pairwise_shifting_prime, ChainKind, Divisor, DivisorSource, LatticeSource, ProductSource, Radius};
use crate::error::Result;
use crate::nevanlinna::{tilde_t, CircleQuadrature, EntireFunction, LogModulus, SineFunction};
use crate::poly::TolerancePolicy;
use crate::scalar::GaussianRational;
use crate::{ExactPoly, ExactRational};

/// Inputs for the entire-function abc harness.
#[derive(Debug, Clone, PartialEq)]
pub enum AbcInput {
    Polynomials { a: ExactPoly, b: ExactPoly, c: ExactPoly },
    /// `sin πz + sin π(z - 1/2) = √2 sin π(z - 1/4)`, which has order 1.
    SineCounterexample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntireAbcOptions {
    pub epsilon: f64,
    /// Order bound `δ`; by default 0 for polynomials and 1 for the sine
    /// triple.
    pub delta: Option<f64>,
    pub tolerance: f64,
    pub grid: Vec<f64>,
}

impl Default for EntireAbcOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            delta: None,
            tolerance: 0.05,
            grid: vec![10.0, 100.0, 1000.0, 10000.0],
        }
    }
}

pub(crate) fn pairwise_prime_precondition(names: &[String], ds: &[&dyn DivisorSource], r: &Radius) -> Precondition {
    let name = "pairwise relatively shifting prime";
    match pairwise_shifting_prime(ds, r) {
        Ok(()) => Precondition::new(name, true, None),
        Err((i, j, (w, w1))) => Precondition::new(name, false, Some(format!("{}, {}: ({w}, {w1})", names[i], names[j]))),
    }
}

/// Common checks for `Σ f_j = f_last` with polynomial entries. Returns the
/// divisors when every entry is nonzero.
fn polynomial_preconditions(fs: &[&ExactPoly], names: &[String], identity: &str, tol: &TolerancePolicy) -> Result<(Vec<Precondition>, Option<Vec<Divisor>>)> {
    let (last, init) = fs.split_last().expect("nonempty");
    let sum = init.iter().fold(ExactPoly::zero(), |acc, f| &acc + *f);
    let mut pre = vec![Precondition::new(
        identity,
        &sum == *last,
        (&sum != *last).then(|| format!("difference {}", &sum - *last)),
    )];
    pre.push(Precondition::new("not all constants", fs.iter().any(|f| !f.is_constant()), None));
    let zero = fs.iter().position(|f| f.is_zero());
    pre.push(Precondition::new(
        "no function identically zero",
        zero.is_none(),
        zero.map(|k| names[k].clone()),
    ));
    if zero.is_some() {
        return Ok((pre, None));
    }
    let ds: Vec<Divisor> = fs.iter().map(|f| Divisor::of_poly(f, tol)).collect::<Result<_>>()?;
    let reach = ds.iter().map(Divisor::covering_radius).fold(1.0, f64::max);
    let refs: Vec<&dyn DivisorSource> = ds.iter().map(|d| d as &dyn DivisorSource).collect();
    pre.push(pairwise_prime_precondition(names, &refs, &Radius::new(reach)?));
    Ok((pre, Some(ds)))
}

fn abc_names() -> [String; 3] {
    ["a".into(), "b".into(), "c".into()]
}

fn product(ds: &[Divisor]) -> Divisor {
    ds.iter().fold(Divisor::new(), |acc, d| acc.product(d))
}

/// `max{deg a, deg b, deg c} <= n̄_Δ(r, 1/abc) - 1` for `r` past every
/// root, exactly.
pub fn verify_poly_abc(a: &ExactPoly, b: &ExactPoly, c: &ExactPoly, tol: &TolerancePolicy) -> Result<MarginReport> {
    let (pre, ds) = polynomial_preconditions(&[a, b, c], &abc_names(), "a + b = c", tol)?;
    gate(&pre)?;
    let abc = product(&ds.expect("nonzero entries"));
    let r = abc.covering_radius();
    let nbar = n_bar_delta(&abc, &Radius::new(r)?, ChainKind::Zero) as f64;
    let lhs = a.deg().max(b.deg()).max(c.deg()) as f64;
    Ok(MarginReport::exact(
        "difference Stothers-Mason (polynomials)",
        inputs([("a", a.to_string()), ("b", b.to_string()), ("c", c.to_string())]),
        vec![r],
        vec![lhs],
        vec![nbar - 1.0],
        pre,
    ))
}

/// `T̃_{a,b,c}(r) <= N̄_Δ(r, 1/abc) - (1 - δ - ε) log r` on a grid.
pub fn verify_entire_abc(
    input: &AbcInput,
    opts: &EntireAbcOptions,
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<MarginReport> {
    let grid = opts.grid.clone();
    let reach = grid.iter().copied().fold(1.0, f64::max);
    match input {
        AbcInput::Polynomials { a, b, c } => {
            let (mut pre, ds) = polynomial_preconditions(&[a, b, c], &abc_names(), "a + b = c", tol)?;
            gate(&pre)?;
            let delta = opts.delta.unwrap_or(0.0);
            pre.push(Precondition::new("order less than 1", delta < 1.0, None));
            let abc = product(&ds.expect("nonzero entries"));
            let nb = big_n_bar_delta(&abc, ChainKind::Zero, f64::INFINITY)?;
            let (ac, bc, cc) = (a.to_complex(), b.to_complex(), c.to_complex());
            let tuple: [&dyn EntireFunction<f64>; 3] = [&ac, &bc, &cc];
            let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
            for &r in &grid {
                lhs.push(tilde_t(&tuple, r, quad)?);
                rhs.push(nb.evaluate(r) - (1.0 - delta - opts.epsilon) * r.ln());
            }
            Ok(MarginReport::from_curves(
                "difference abc for entire functions",
                inputs([
                    ("a", a.to_string()),
                    ("b", b.to_string()),
                    ("c", c.to_string()),
                    ("epsilon", opts.epsilon.to_string()),
                    ("delta", delta.to_string()),
                ]),
                grid,
                lhs,
                rhs,
                pre,
                opts.tolerance,
            ))
        }
        AbcInput::SineCounterexample => {
            let delta = opts.delta.unwrap_or(1.0);
            let shifts = [GaussianRational::from_ints(0, 0), GaussianRational::ratio(1, 2), GaussianRational::ratio(1, 4)];
            let sources: Vec<LatticeSource> = shifts.iter().cloned().map(LatticeSource::sine).collect();
            let fs = [
                SineFunction { scale: Complex64::new(1.0, 0.0), shift: Complex64::new(0.0, 0.0) },
                SineFunction { scale: Complex64::new(1.0, 0.0), shift: Complex64::new(0.5, 0.0) },
                SineFunction { scale: Complex64::new(std::f64::consts::SQRT_2, 0.0), shift: Complex64::new(0.25, 0.0) },
            ];
            let mut pre = vec![sum_identity_numeric(&fs)];
            pre.push(Precondition::new("not all constants", true, None));
            let refs: Vec<&dyn DivisorSource> = sources.iter().map(|s| s as &dyn DivisorSource).collect();
            pre.push(pairwise_prime_precondition(&abc_names(), &refs, &Radius::new(reach)?));
            gate(&pre)?;
            pre.push(Precondition::new("order less than 1", delta < 1.0, Some("order 1".into())));
            let abc = ProductSource::new(sources.into_iter().map(|s| Arc::new(s) as Arc<dyn DivisorSource>).collect());
            let nb = big_n_bar_delta(&abc, ChainKind::Zero, reach)?;
            let tuple: [&dyn EntireFunction<f64>; 3] = [&fs[0], &fs[1], &fs[2]];
            let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
            for &r in &grid {
                lhs.push(tilde_t(&tuple, r, quad)?);
                rhs.push(nb.evaluate(r) - (1.0 - delta - opts.epsilon) * r.ln());
            }
            Ok(MarginReport::from_curves(
                "difference abc for entire functions",
                inputs([
                    ("a", "sin(pi*z)".into()),
                    ("b", "sin(pi*(z-1/2))".into()),
                    ("c", "sqrt(2)*sin(pi*(z-1/4))".into()),
                    ("epsilon", opts.epsilon.to_string()),
                    ("delta", delta.to_string()),
                ]),
                grid,
                lhs,
                rhs,
                pre,
                opts.tolerance,
            ))
        }
    }
}

fn sum_identity_numeric(fs: &[SineFunction<f64>; 3]) -> Precondition {
    let eval = |f: &SineFunction<f64>, z: Complex64| f.scale * ((z - f.shift) * std::f64::consts::PI).sin();
    let worst = [Complex64::new(0.3, 0.1), Complex64::new(-2.7, 0.8), Complex64::new(5.1, -1.3)]
        .into_iter()
        .map(|z| {
            let d = eval(&fs[0], z) + eval(&fs[1], z) - eval(&fs[2], z);
            d.norm() / fs[2].log_abs(z).exp().max(1.0)
        })
        .fold(0.0, f64::max);
    Precondition::new("a + b = c", worst < 1e-9, (worst >= 1e-9).then(|| format!("residual {worst:e}")))
}

/// `T̃_{f_1..f_{m+1}}(r) <= (m-1) N̄_Δ(r, 1/∏f_j) - m(m-1)/2 (1-δ-ε) log r`.
pub fn verify_m_term(
    fs: &[ExactPoly],
    opts: &EntireAbcOptions,
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<MarginReport> {
    let m = fs.len().saturating_sub(1);
    let mut pre = vec![Precondition::new("m > 2", m > 2, Some(format!("m = {m}")).filter(|_| m <= 2))];
    gate(&pre)?;
    let refs: Vec<&ExactPoly> = fs.iter().collect();
    let names: Vec<String> = (1..=fs.len()).map(|k| format!("f{k}")).collect();
    let (more, ds) = polynomial_preconditions(&refs, &names, "f_1 + ... + f_m = f_(m+1)", tol)?;
    pre.extend(more);
    gate(&pre)?;
    let rats: Vec<ExactRational> = fs[..m].iter().cloned().map(ExactRational::from_poly).collect();
    pre.push(Precondition::new("f_1..f_m linearly independent", linearly_independent(&rats), None));
    gate(&pre)?;
    let delta = opts.delta.unwrap_or(0.0);
    pre.push(Precondition::new("order less than 1", delta < 1.0, None));

    let prod = product(&ds.expect("nonzero entries"));
    let nb = big_n_bar_delta(&prod, ChainKind::Zero, f64::INFINITY)?;
    let cs: Vec<_> = fs.iter().map(ExactPoly::to_complex).collect();
    let tuple: Vec<&dyn EntireFunction<f64>> = cs.iter().map(|c| c as &dyn EntireFunction<f64>).collect();
    let (mf, m1) = (m as f64, (m - 1) as f64);
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &r in &opts.grid {
        lhs.push(tilde_t(&tuple, r, quad)?);
        rhs.push(m1 * nb.evaluate(r) - mf * m1 / 2.0 * (1.0 - delta - opts.epsilon) * r.ln());
    }
    let mut ins = inputs([("m", m.to_string()), ("epsilon", opts.epsilon.to_string()), ("delta", delta.to_string())]);
    for (k, f) in fs.iter().enumerate() {
        ins.insert(format!("f{}", k + 1), f.to_string());
    }
    Ok(MarginReport::from_curves(
        "difference m-term abc",
        ins,
        opts.grid.clone(),
        lhs,
        rhs,
        pre,
        opts.tolerance,
    ))
}

fn random_root_poly(rng: &mut ChaCha8Rng, degree: usize, span: i64) -> ExactPoly {
    let units = [(1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (1, 1), (3, 0)];
    let (lr, li) = units[rng.gen_range(0..units.len())];
    let mut p = ExactPoly::constant(GaussianRational::from_ints(lr, li));
    for _ in 0..degree {
        let w = GaussianRational::from_ints(rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        p = &p * &ExactPoly::linear(w);
    }
    p
}

fn admissible(fs: &[&ExactPoly], tol: &TolerancePolicy) -> bool {
    let names: Vec<String> = (1..=fs.len()).map(|k| format!("f{k}")).collect();
    matches!(polynomial_preconditions(fs, &names, "sum identity", tol), Ok((pre, _)) if pre.iter().all(|p| p.holds))
}

/// `count` triples `(a, b, a+b)`: `a`, `b` with Gaussian-integer roots,
/// kept when the abc preconditions hold. Deterministic in `seed`.
pub fn admissible_abc_corpus(count: usize, seed: u64, tol: &TolerancePolicy) -> Vec<(ExactPoly, ExactPoly, ExactPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let da = rng.gen_range(1..=3);
        let a = random_root_poly(&mut rng, da, 4);
        let db = rng.gen_range(0..=3);
        let b = random_root_poly(&mut rng, db, 4);
        let c = &a + &b;
        if admissible(&[&a, &b, &c], tol) {
            out.push((a, b, c));
        }
    }
    out
}

/// First admissible `(f_1, …, f_m, Σ f_j)` drawn from the same generator.
pub fn admissible_mterm_instance(m: usize, seed: u64, tol: &TolerancePolicy) -> Vec<ExactPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut fs: Vec<ExactPoly> = (0..m).map(|_| {
                let d = rng.gen_range(0..=2);
                random_root_poly(&mut rng, d, 3)
            }).collect();
        let sum = fs.iter().fold(ExactPoly::zero(), |acc, f| &acc + f);
        fs.push(sum);
        let refs: Vec<&ExactPoly> = fs.iter().collect();
        let rats: Vec<ExactRational> = fs[..m].iter().cloned().map(ExactRational::from_poly).collect();
        if admissible(&refs, tol) && linearly_independent(&rats) {
            return fs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::theorems::Verdict;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    fn t() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn curated_triple() {
        let rep = verify_poly_abc(&p(&[1, 0, 1]), &p(&[-2]), &p(&[-1, 0, 1]), &t()).unwrap();
        assert_eq!(rep.lhs, vec![2.0]);
        assert_eq!(rep.rhs, vec![3.0]);
        assert_eq!(rep.margin, vec![1.0]);
        assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn adjacent_zeros_fail_the_gate() {
        let err = verify_poly_abc(&p(&[0, 1]), &p(&[1, -1]), &p(&[1]), &t()).unwrap_err();
        match err {
            Error::PreconditionFailed { which, witness } => {
                assert_eq!(which, "pairwise relatively shifting prime");
                assert_eq!(witness.as_deref(), Some("a, b: (0, 1)"));
            }
            e => panic!("{e}"),
        }
        assert!(verify_poly_abc(&p(&[1]), &p(&[2]), &p(&[3]), &t()).is_err());
        assert!(verify_poly_abc(&p(&[1]), &p(&[2]), &p(&[4]), &t()).is_err());
    }

    #[test]
    fn entire_polynomial_mode_holds() {
        let q = CircleQuadrature::new(4096).unwrap();
        let opts = EntireAbcOptions { grid: vec![10.0, 100.0, 1000.0], ..Default::default() };
        let input = AbcInput::Polynomials { a: p(&[1, 0, 1]), b: p(&[-2]), c: p(&[-1, 0, 1]) };
        let rep = verify_entire_abc(&input, &opts, &q, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "{rep:?}");
        let consts = AbcInput::Polynomials { a: p(&[1]), b: p(&[1]), c: p(&[2]) };
        assert!(matches!(
            verify_entire_abc(&consts, &opts, &q, &t()),
            Err(Error::PreconditionFailed { which, .. }) if which == "not all constants"
        ));
    }

    #[test]
    fn sine_counterexample_is_violated() {
        let q = CircleQuadrature::new(4096).unwrap();
        let opts = EntireAbcOptions { grid: vec![100.0, 1000.0], ..Default::default() };
        let rep = verify_entire_abc(&AbcInput::SineCounterexample, &opts, &q, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        assert!(rep.margin[0] < 0.0 && rep.margin[1] <= 5.0 * rep.margin[0]);
    }

    #[test]
    fn m_term_gates() {
        let q = CircleQuadrature::new(1024).unwrap();
        let opts = EntireAbcOptions::default();
        // dependent tuple: f_3 = f_1 + f_2
        let (a, b) = (p(&[1, 0, 1]), p(&[-2]));
        let c = &a + &b;
        let d = &(&a + &b) + &c;
        assert!(matches!(
            verify_m_term(&[a.clone(), b.clone(), c, d], &opts, &q, &t()),
            Err(Error::PreconditionFailed { which, .. }) if which == "f_1..f_m linearly independent"
        ));
        // z and z-1 adjacent
        let fs = [p(&[0, 1]), p(&[-1, 1]), p(&[5, 0, 1])];
        let sum = fs.iter().fold(ExactPoly::zero(), |acc, f| &acc + f);
        let all = [fs[0].clone(), fs[1].clone(), fs[2].clone(), sum];
        assert!(matches!(
            verify_m_term(&all, &opts, &q, &t()),
            Err(Error::PreconditionFailed { witness: Some(_), .. })
        ));
        assert!(verify_m_term(&[a, b.clone(), b], &opts, &q, &t()).is_err());
    }

    #[test]
    fn generated_m_term_instance_holds() {
        let q = CircleQuadrature::new(4096).unwrap();
        let fs = admissible_mterm_instance(3, 7, &t());
        let rep = verify_m_term(&fs, &EntireAbcOptions::default(), &q, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "{rep:?}");
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = admissible_abc_corpus(5, 3, &t());
        assert_eq!(a, admissible_abc_corpus(5, 3, &t()));
        for (a, b, c) in &a {
            assert!(verify_poly_abc(a, b, c, &t()).unwrap().holds());
        }
    }
}
