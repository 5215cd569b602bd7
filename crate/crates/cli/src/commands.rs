//! Command-line surface. Every command prints one JSON document on stdout
//! (or writes a CSV file and reports it) and maps its outcome to an exit
//! code: 0 holds or success, 1 violated or counterexample found, 2
//! precondition failed, 3 input error.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffnev_core::counting::{
    a_points, big_n, big_n_bar_delta, curve_csv, log_grid, n_bar_delta, n_classical, n_tilde_iklt, Value,
};
use diffnev_core::divisor::{
    chain_decompose, classic_radical, difference_radical, length_of_pole_at, length_of_zero_at, Chain, ChainKind,
    Divisor, DivisorFile, DivisorPoint, DivisorSource, Radius,
};
use diffnev_core::nevanlinna::CircleQuadrature;
use diffnev_core::poly::roots_exact;
use diffnev_core::theorems::{
    admissible_mterm_instance, complete_long_values, fermat_check, fermat_search, long_value_candidates,
    shifting_share, smt_report, verify_entire_abc, verify_m_term, verify_poly_abc, AbcInput, EntireAbcOptions,
    FermatBounds, FermatVerdict, MarginReport, Verdict,
};
use diffnev_core::{casorati::casorati, ExactRational};
use serde::Serialize;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::config::{Config, ConfigError};
use crate::expr::{parse_constant, parse_poly, parse_rational_fn, EvalError};

#[derive(Debug, Parser)]
#[command(name = "diffnev", version, about = "Difference calculus and difference Nevanlinna checks")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Polynomial or rational function, e.g. "z^2*(z-1)^3".
    #[arg(required_unless_present = "divisor")]
    pub expr: Option<String>,

    /// JSON divisor file instead of an expression.
    #[arg(long, conflicts_with = "expr")]
    pub divisor: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Zeros,
    Poles,
}

impl From<KindArg> for ChainKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Zeros => ChainKind::Zero,
            KindArg::Poles => ChainKind::Pole,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeros and poles with multiplicities; with --delta, their chains.
    Factor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        delta: bool,
        /// Disc radius for the chains (default: past every point).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Difference radical (default) or classical radical of a polynomial.
    Radical {
        expr: String,
        #[arg(long, conflicts_with = "delta")]
        classic: bool,
        #[arg(long)]
        delta: bool,
    },
    /// Length of the zero (or pole) run starting at a point.
    Length {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        pole: bool,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Counting functions in the closed disc of radius R.
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "zeros")]
        kind: KindArg,
        #[arg(long)]
        radius: f64,
        /// Count a-points instead: a number or "inf".
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// CSV of r,n,N,nBarDelta,NBarDelta over the configured grid.
    Curve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "zeros")]
        kind: KindArg,
    },
    /// Difference Stothers-Mason and abc checks.
    Abc {
        #[command(subcommand)]
        action: AbcAction,
    },
    /// m-term abc check for f_1 + ... + f_m = f_(m+1).
    Mterm {
        #[command(subcommand)]
        action: MtermAction,
    },
    /// Second main theorem slope report.
    Smt {
        #[command(subcommand)]
        action: SmtAction,
    },
    /// Falling-power Fermat equations.
    Fermat {
        #[command(subcommand)]
        action: FermatAction,
    },
    /// Casorati determinant of rational functions.
    Casorati {
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Whether f and g shifting share a value.
    Share {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Disc radius (default: every disc).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Complete long values among the automatic candidates and any given.
    LongValues {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "candidate", allow_hyphen_values = true)]
        candidates: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AbcAction {
    Verify {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sine_counterexample")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sine_counterexample")]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sine_counterexample")]
        c: Option<String>,
        /// Quadrature check of the entire-function form instead of the
        /// exact degree form.
        #[arg(long)]
        entire: bool,
        /// The order-one triple sin πz, sin π(z-1/2), √2 sin π(z-1/4).
        #[arg(long, conflicts_with_all = ["a", "b", "c"])]
        sine_counterexample: bool,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MtermAction {
    Verify {
        /// f_1 … f_(m+1).
        #[arg(allow_hyphen_values = true, required_unless_present = "generate")]
        exprs: Vec<String>,
        /// Use a generated admissible instance with this m.
        #[arg(long, conflicts_with = "exprs")]
        generate: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SmtAction {
    Report {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long = "value", required = true, allow_hyphen_values = true)]
        values: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FermatAction {
    Check {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        n: usize,
    },
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        /// Stop after this many instances (0: no limit).
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        #[arg(long)]
        shuffle_seed: Option<u64>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Expr(#[from] EvalError),
    #[error(transparent)]
    Core(#[from] diffnev_core::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Expr(EvalError::Syntax(_)) => "syntax",
            CliError::Expr(_) => "expression",
            CliError::Core(diffnev_core::Error::PreconditionFailed { .. }) => "precondition_failed",
            CliError::Core(_) => "computation",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
        }
    }
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn error_json(kind: &str, detail: String) -> String {
    to_json(&json!({ "error": kind, "detail": detail }))
}

impl Outcome {
    fn ok<T: Serialize>(v: &T, code: i32) -> Self {
        Self {
            stdout: to_json(v),
            stderr: String::new(),
            code,
        }
    }

    pub fn from_error(e: CliError) -> Self {
        let detail = e.to_string();
        match e {
            CliError::Core(diffnev_core::Error::PreconditionFailed { which, witness }) => Self {
                stdout: to_json(&json!({
                    "verdict": "precondition_failed",
                    "precondition": which,
                    "witness": witness,
                })),
                stderr: error_json("precondition_failed", detail),
                code: 2,
            },
            e => Self {
                stdout: String::new(),
                stderr: error_json(e.kind(), detail),
                code: 3,
            },
        }
    }

    pub fn usage(detail: String) -> Self {
        Self::from_error(CliError::Usage(detail))
    }
}

type Res<T> = Result<T, CliError>;

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds | Verdict::Inconclusive => 0,
        Verdict::Violated => 1,
    }
}

fn report(rep: &MarginReport) -> Outcome {
    Outcome::ok(rep, verdict_code(rep.verdict))
}

pub fn parse_value(s: &str) -> Res<Value> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Value::Infinity),
        t => Ok(Value::Finite(parse_constant(t)?)),
    }
}

enum Source {
    Function(ExactRational, Divisor),
    File(Arc<dyn DivisorSource>),
}

impl Source {
    fn load(input: &Input, cfg: &Config) -> Res<Self> {
        match (&input.expr, &input.divisor) {
            (Some(e), None) => {
                let f = parse_rational_fn(e)?;
                if f.is_zero() {
                    return Err(diffnev_core::Error::ZeroPolynomial.into());
                }
                let d = Divisor::of_rational(&f, &cfg.tolerance)?;
                Ok(Source::Function(f, d))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Ok(Source::File(DivisorFile::parse(&text)?.to_source()))
            }
            _ => Err(CliError::Usage("give exactly one of EXPR or --divisor".into())),
        }
    }

    fn src(&self) -> &dyn DivisorSource {
        match self {
            Source::Function(_, d) => d,
            Source::File(s) => s.as_ref(),
        }
    }

    /// The given radius, or one past every point of a finite divisor.
    fn radius(&self, r: Option<f64>) -> Res<f64> {
        if let Some(r) = r {
            return Ok(r);
        }
        match self.src().all_points() {
            Some(pts) => Ok(Divisor::from_points(pts).covering_radius()),
            None => Err(CliError::Usage("--radius is required for an infinite divisor".into())),
        }
    }
}

fn point_list(src: &dyn DivisorSource, r: &Radius, kind: ChainKind) -> Vec<Json> {
    src.points_within(r)
        .into_iter()
        .filter(|p| p.mult(kind) > 0)
        .map(|p: DivisorPoint| json!({ "at": p.at.to_string(), "mult": p.mult(kind) }))
        .collect()
}

fn chain_list(chains: &[Chain]) -> Vec<Json> {
    chains
        .iter()
        .map(|c| {
            let mut o = json!({ "start": c.start.to_string(), "length": c.length });
            if c.clipped {
                o["clipped"] = json!(true);
            }
            o
        })
        .collect()
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(o) => o,
        Err(e) => Outcome::from_error(e),
    }
}

fn execute(cli: &Cli) -> Res<Outcome> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let tol = cfg.tolerance;
    let quad = || CircleQuadrature::<f64>::from_policy(&tol);
    match &cli.command {
        Command::Factor { input, delta, radius } => {
            let s = Source::load(input, &cfg)?;
            let r = s.radius(*radius)?;
            let rad = Radius::new(r)?;
            let mut out = json!({
                "radius": r,
                "zeros": point_list(s.src(), &rad, ChainKind::Zero),
                "poles": point_list(s.src(), &rad, ChainKind::Pole),
            });
            if let Source::Function(f, _) = &s {
                out["function"] = json!(f.to_string());
            }
            if *delta {
                for (kind, key) in [(ChainKind::Zero, "zero_chains"), (ChainKind::Pole, "pole_chains")] {
                    let dec = chain_decompose(s.src(), &rad, kind);
                    out[key] = json!(chain_list(&dec.chains));
                }
                out["n_bar_delta_zeros"] = json!(n_bar_delta(s.src(), &rad, ChainKind::Zero));
                out["n_bar_delta_poles"] = json!(n_bar_delta(s.src(), &rad, ChainKind::Pole));
            }
            Ok(Outcome::ok(&out, 0))
        }
        Command::Radical { expr, classic, .. } => {
            let p = parse_poly(expr)?;
            let fp = roots_exact(&p)?;
            let rad = if *classic { classic_radical(&fp) } else { difference_radical(&fp) };
            Ok(Outcome::ok(
                &json!({
                    "kind": if *classic { "classic" } else { "delta" },
                    "radical": rad.to_string(),
                    "expanded": rad.expand().to_string(),
                    "degree": rad.degree(),
                }),
                0,
            ))
        }
        Command::Length { input, at, pole, radius } => {
            let s = Source::load(input, &cfg)?;
            let at = parse_constant(at)?;
            let rad = Radius::new(s.radius(*radius)?)?;
            let len = if *pole {
                length_of_pole_at(s.src(), &at, &rad)
            } else {
                length_of_zero_at(s.src(), &at, &rad)
            };
            Ok(Outcome::ok(
                &json!({ "at": at.to_string(), "kind": if *pole { "pole" } else { "zero" }, "length": len }),
                0,
            ))
        }
        Command::Count { input, kind, radius, value } => {
            let s = Source::load(input, &cfg)?;
            let (owned, kind): (Option<Divisor>, ChainKind) = match (value, &s) {
                (None, _) => (None, (*kind).into()),
                (Some(v), Source::Function(f, _)) => {
                    let (d, k) = a_points(f, &parse_value(v)?, &tol)?;
                    (Some(d), k)
                }
                (Some(_), Source::File(_)) => {
                    return Err(CliError::Usage("--value needs an expression input".into()));
                }
            };
            let src: &dyn DivisorSource = match &owned {
                Some(d) => d,
                None => s.src(),
            };
            let rad = Radius::new(*radius)?;
            let reach = if src.all_points().is_some() { f64::INFINITY } else { *radius };
            let mut out = json!({
                "kind": kind,
                "radius": radius,
                "n": n_classical(src, &rad, kind),
                "N": big_n(src, kind, reach)?.evaluate(*radius),
                "n_bar_delta": n_bar_delta(src, &rad, kind),
                "N_bar_delta": big_n_bar_delta(src, kind, reach)?.evaluate(*radius),
                "chains": chain_list(&chain_decompose(src, &rad, kind).chains),
            });
            if kind == ChainKind::Zero {
                out["n_tilde"] = json!(n_tilde_iklt(src, &rad));
            }
            if let Some(v) = value {
                out["value"] = json!(parse_value(v)?.to_string());
            }
            Ok(Outcome::ok(&out, 0))
        }
        Command::Curve { input, out, kind } => {
            let s = Source::load(input, &cfg)?;
            let g = cfg.grid.spec();
            let grid = log_grid(g.r_min, g.r_max, g.points);
            let csv = curve_csv(s.src(), (*kind).into(), &grid)?;
            std::fs::write(out, &csv).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?;
            Ok(Outcome::ok(&json!({ "out": out.display().to_string(), "rows": grid.len() }), 0))
        }
        Command::Abc {
            action: AbcAction::Verify { a, b, c, entire, sine_counterexample, epsilon, delta },
        } => {
            let opts = EntireAbcOptions {
                epsilon: *epsilon,
                delta: *delta,
                grid: cfg.grid.spec().radii()?,
                ..Default::default()
            };
            if *sine_counterexample {
                return Ok(report(&verify_entire_abc(&AbcInput::SineCounterexample, &opts, &quad()?, &tol)?));
            }
            let polys = [a, b, c].map(|e| parse_poly(e.as_deref().unwrap_or_default()));
            let [a, b, c] = polys;
            let (a, b, c) = (a?, b?, c?);
            if *entire {
                let input = AbcInput::Polynomials { a, b, c };
                Ok(report(&verify_entire_abc(&input, &opts, &quad()?, &tol)?))
            } else {
                Ok(report(&verify_poly_abc(&a, &b, &c, &tol)?))
            }
        }
        Command::Mterm {
            action: MtermAction::Verify { exprs, generate, epsilon },
        } => {
            let fs = match generate {
                Some(m) => admissible_mterm_instance(*m, cfg.seed, &tol),
                None => exprs.iter().map(|e| parse_poly(e)).collect::<Result<Vec<_>, _>>()?,
            };
            let opts = EntireAbcOptions {
                epsilon: *epsilon,
                grid: cfg.grid.spec().radii()?,
                ..Default::default()
            };
            Ok(report(&verify_m_term(&fs, &opts, &quad()?, &tol)?))
        }
        Command::Smt {
            action: SmtAction::Report { f, values },
        } => {
            let f = parse_rational_fn(f)?;
            let vals = values.iter().map(|v| parse_value(v)).collect::<Res<Vec<_>>>()?;
            let rep = smt_report(&f, &vals, &cfg.grid.spec().radii()?, &quad()?, &tol)?;
            Ok(Outcome::ok(&rep, verdict_code(rep.report.verdict)))
        }
        Command::Fermat { action } => match action {
            FermatAction::Check { a, b, c, n } => {
                let (a, b, c) = (parse_poly(a)?, parse_poly(b)?, parse_poly(c)?);
                let v = fermat_check(&a, &b, &c, *n, &tol)?;
                let code = match &v {
                    FermatVerdict::Valid if *n >= 3 => 1,
                    FermatVerdict::PreconditionFails(_) => 2,
                    _ => 0,
                };
                let mut out = serde_json::to_value(&v).expect("serializable");
                out["n"] = json!(n);
                Ok(Outcome::ok(&out, code))
            }
            FermatAction::Search { n, max_degree, coeff_bound, limit, shuffle_seed } => {
                let bounds = FermatBounds {
                    max_degree: *max_degree,
                    coeff_bound: *coeff_bound,
                    limit: (*limit > 0).then_some(*limit),
                    shuffle_seed: *shuffle_seed,
                };
                let res = fermat_search(&bounds, *n, &tol)?;
                let code = i32::from(*n >= 3 && !res.instances.is_empty());
                Ok(Outcome::ok(&res, code))
            }
        },
        Command::Casorati { exprs } => {
            let fs = exprs.iter().map(|e| parse_rational_fn(e)).collect::<Result<Vec<_>, _>>()?;
            let det = casorati(&fs);
            Ok(Outcome::ok(
                &json!({ "determinant": det.to_string(), "linearly_independent": !det.is_zero() }),
                0,
            ))
        }
        Command::Share { f, g, value, radius } => {
            let (f, g) = (parse_rational_fn(f)?, parse_rational_fn(g)?);
            let a = parse_value(value)?;
            let shared = shifting_share(&f, &g, &a, *radius, &tol)?;
            Ok(Outcome::ok(
                &json!({ "value": a.to_string(), "radius": radius, "shared": shared }),
                0,
            ))
        }
        Command::LongValues { expr, candidates } => {
            let f = parse_rational_fn(expr)?;
            let mut cands = long_value_candidates(&f)?;
            for c in candidates {
                cands.push(parse_value(c)?);
            }
            let found = complete_long_values(&f, &cands, &tol)?;
            Ok(Outcome::ok(
                &json!({
                    "function": f.to_string(),
                    "candidates": cands.iter().map(Value::to_string).collect::<Vec<_>>(),
                    "complete_long_values": found.iter().map(Value::to_string).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
    }
}
