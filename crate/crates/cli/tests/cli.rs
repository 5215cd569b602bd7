use std::process::{Command, Output};

use diffnev_cli::expr::{parse, parse_rational_fn, Expr};
use diffnev_core::GaussianRational;
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffnev")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let holds = run(&["abc", "verify", "--a", "z^2+1", "--b", "-2", "--c", "z^2-1"]);
    assert_eq!(holds.status.code(), Some(0));
    assert_eq!(json(&holds)["verdict"], "holds");

    let violated = run(&["abc", "verify", "--sine-counterexample"]);
    assert_eq!(violated.status.code(), Some(1));

    let gated = run(&["abc", "verify", "--a", "z", "--b", "1-z", "--c", "1"]);
    assert_eq!(gated.status.code(), Some(2));
    assert_eq!(json(&gated)["witness"], "a, b: (0, 1)");
    assert_eq!(stderr_json(&gated)["error"], "precondition_failed");

    let bad = run(&["factor", "z^"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(bad.stdout.is_empty());
    assert_eq!(stderr_json(&bad)["error"], "syntax");

    let usage = run(&["nonsense"]);
    assert_eq!(usage.status.code(), Some(3));
    assert_eq!(stderr_json(&usage)["error"], "usage");

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn fermat_exit_codes() {
    let valid = run(&["fermat", "check", "--a", "z^2+1", "--b", "-2", "--c", "z^2-1", "--n", "1"]);
    assert_eq!(valid.status.code(), Some(0));
    assert_eq!(json(&valid)["verdict"], "valid");

    let fails = run(&["fermat", "check", "--a", "z", "--b", "z", "--c", "z", "--n", "2"]);
    assert_eq!(fails.status.code(), Some(0));
    assert_eq!(json(&fails)["verdict"], "identity_fails");

    let zero = run(&["fermat", "check", "--a", "0", "--b", "0", "--c", "0", "--n", "2"]);
    assert_eq!(zero.status.code(), Some(2));

    let none = run(&["fermat", "search", "--n", "3", "--max-degree", "1", "--coeff-bound", "1"]);
    assert_eq!(none.status.code(), Some(0));
    assert_eq!(json(&none)["instances"], serde_json::json!([]));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["factor", "--delta", "z^2*(z-1)^3*(z-2)^4/(z+1/2)"][..],
        &["smt", "report", "--f", "1/fall(z,2)", "--value", "1", "--value", "2i"],
        &["fermat", "search", "--n", "2", "--max-degree", "1", "--coeff-bound", "2", "--shuffle-seed", "4"],
        &["mterm", "verify", "--generate", "3"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn radicals_and_counts() {
    // chains (0, 2), (0, 2), (1, 1)
    let r = json(&run(&["radical", "z^2*(z-1)^3"]));
    assert_eq!(r["radical"], "z^2*(z-1)");
    let c = json(&run(&["radical", "--classic", "z^2*(z-1)^3"]));
    assert_eq!(c["radical"], "z*(z-1)");
    assert_eq!(c["degree"], 2);

    let n = json(&run(&["count", "--radius", "4", "z^2*(z-1)^3*(z-2)^4"]));
    assert_eq!((n["n"].as_u64(), n["n_bar_delta"].as_u64()), (Some(9), Some(4)));

    let a = json(&run(&["count", "--radius", "10", "--value", "1", "fall(z,2)+1"]));
    assert_eq!(a["n_bar_delta"], 1);
    let inf = json(&run(&["count", "--radius", "10", "--value", "inf", "1/z^2"]));
    assert_eq!((inf["kind"].as_str(), inf["n"].as_u64()), (Some("pole"), Some(2)));
}

#[test]
fn sharing_and_casorati() {
    let s = json(&run(&["share", "--value", "0", "fall(z,3)", "z"]));
    assert_eq!(s["shared"], true);
    let t = json(&run(&["share", "--value", "0", "z", "z^2"]));
    assert_eq!(t["shared"], false);
    let d = json(&run(&["casorati", "1", "z", "z^2"]));
    assert_eq!(d["determinant"], "2");
}

#[test]
fn curve_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("diffnev.toml");
    std::fs::write(&cfg, "[grid]\nr_min = 1.0\nr_max = 100.0\npoints = 3\n").unwrap();
    let csv = dir.path().join("curve.csv");
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "curve",
        "--out",
        csv.to_str().unwrap(),
        "z^2*(z-1)^3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,n,N,nBarDelta,NBarDelta");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,5,"), "{}", lines[1]);

    std::fs::write(&cfg, "[grid]\npoints = 0\n").unwrap();
    let bad = run(&["--config", cfg.to_str().unwrap(), "casorati", "z"]);
    assert_eq!(bad.status.code(), Some(3));
    assert_eq!(stderr_json(&bad)["error"], "config");
}

#[test]
fn divisor_files_drive_the_counting_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.json");
    std::fs::write(
        &file,
        r#"[{"re": "0", "im": "0", "zmult": 2, "pmult": 0}, {"re": "1", "im": "0", "zmult": 1, "pmult": 0}]"#,
    )
    .unwrap();
    let f = json(&run(&["factor", "--delta", "--divisor", file.to_str().unwrap()]));
    assert_eq!(f["n_bar_delta_zeros"], 2);
    let l = json(&run(&["length", "--at", "0", "--divisor", file.to_str().unwrap()]));
    assert_eq!(l["length"], 2);
}

/// Constants the parser can produce: nonnegative reals and positive
/// imaginaries with terminating decimals.
fn literal() -> impl Strategy<Value = GaussianRational> {
    (0i64..2000, 0u32..3, any::<bool>()).prop_map(|(n, places, imag)| {
        let q = GaussianRational::ratio(n, 10i64.pow(places));
        if imag && n > 0 {
            q * GaussianRational::i()
        } else {
            q
        }
    })
}

/// Any Gaussian rational, including ones with no literal spelling.
fn constant() -> impl Strategy<Value = GaussianRational> {
    (-20i64..20, -20i64..20, 1i64..7)
        .prop_map(|(a, b, q)| GaussianRational::from_ints(a, b) * GaussianRational::ratio(1, q))
}

fn expr(constants: BoxedStrategy<GaussianRational>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Var), constants.prop_map(Expr::Num)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (inner.clone(), -3i32..4).prop_filter("nonzero", |(_, n)| *n != 0).prop_map(|(a, n)| Expr::Fall(Box::new(a), n)),
            (inner.clone(), 1u32..3).prop_map(|(a, n)| Expr::Delta(Box::new(a), n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_then_parsing_is_the_identity(e in expr(literal().boxed())) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn evaluation_survives_a_print_round_trip(e in expr(constant().boxed())) {
        let printed = e.to_string();
        if let Ok(f) = e.eval() {
            let g = parse_rational_fn(&f.to_string()).unwrap();
            prop_assert_eq!(g, f);
            prop_assert_eq!(parse(&printed).unwrap().eval().unwrap(), e.eval().unwrap());
        }
    }
}
