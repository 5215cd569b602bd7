use std::collections::BTreeMap;

use serde::Serialize;

use super::{MarginReport, Precondition, Verdict};
use crate::counting::{a_points, big_n_bar_delta, Value};
use crate::divisor::{chain_decompose, ChainKind, Divisor, Radius};
use crate::error::{Error, Result};
use crate::nevanlinna::{characteristic, CircleQuadrature};
use crate::poly::{split_rational_roots, TolerancePolicy};
use crate::scalar::GaussianRational;
use crate::ExactRational;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmtReport {
    #[serde(flatten)]
    pub report: MarginReport,
    pub lhs_slope: i64,
    pub rhs_slope: i64,
    pub slope_margin: i64,
    /// `(margin(10⁴) - margin(10³)) / log 10` from the evaluated curves.
    pub finite_difference_slope: f64,
}

fn finite_values(values: &[Value]) -> Result<Vec<GaussianRational>> {
    values
        .iter()
        .map(|v| match v {
            Value::Finite(a) => Ok(a.clone()),
            Value::Infinity => Err(Error::InvalidArgument("second main theorem values must be finite".into())),
        })
        .collect()
}

/// Slopes of `(q-1) T(r, f)` against `N̄_Δ(r, f) + Σ N̄_Δ(r, 1/(f - a_k))`.
/// For rational `f` both sides are eventually `slope · log r + O(1)`, so
/// the error term cannot change the comparison.
pub fn smt_report(
    f: &ExactRational,
    values: &[Value],
    grid: &[f64],
    quad: &CircleQuadrature<f64>,
    tol: &TolerancePolicy,
) -> Result<SmtReport> {
    let a = finite_values(values)?;
    let q = a.len();
    let mut distinct = a.clone();
    distinct.sort();
    distinct.dedup();
    let pre = vec![
        Precondition::new("f nonconstant", !f.is_constant(), None),
        Precondition::new("delta f not identically zero", !f.delta(1).is_zero(), None),
        Precondition::new("q >= 2", q >= 2, (q < 2).then(|| format!("q = {q}"))),
        Precondition::new("values distinct", distinct.len() == q, None),
    ];
    super::gate(&pre)?;

    let (poles, pk) = a_points(f, &Value::Infinity, tol)?;
    let mut rhs_curves = vec![big_n_bar_delta(&poles, pk, f64::INFINITY)?];
    for ak in &a {
        let (d, kind) = a_points(f, &Value::Finite(ak.clone()), tol)?;
        rhs_curves.push(big_n_bar_delta(&d, kind, f64::INFINITY)?);
    }
    let q1 = (q - 1) as f64;
    let lhs_at = |r: f64| characteristic(f, r, quad, tol).map(|t| q1 * t);
    let rhs_at = |r: f64| rhs_curves.iter().map(|c| c.evaluate(r)).sum::<f64>();

    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &r in grid {
        lhs.push(lhs_at(r)?);
        rhs.push(rhs_at(r));
    }
    let lhs_slope = (q as i64 - 1) * f.degree() as i64;
    let rhs_slope: i64 = rhs_curves.iter().map(|c| c.slope()).sum();
    let (r0, r1) = (1e3, 1e4);
    let fd = ((rhs_at(r1) - lhs_at(r1)?) - (rhs_at(r0) - lhs_at(r0)?)) / (r1 / r0).ln();

    let mut inputs = BTreeMap::new();
    inputs.insert("f".to_string(), f.to_string());
    for (k, ak) in a.iter().enumerate() {
        inputs.insert(format!("a{}", k + 1), ak.to_string());
    }
    let mut report = MarginReport::from_curves(
        "difference second main theorem (slopes)",
        inputs,
        grid.to_vec(),
        lhs,
        rhs,
        pre,
        0.0,
    );
    let slope_margin = rhs_slope - lhs_slope;
    report.verdict = if slope_margin >= 0 { Verdict::Holds } else { Verdict::Violated };
    Ok(SmtReport {
        report,
        lhs_slope,
        rhs_slope,
        slope_margin,
        finite_difference_slope: fd,
    })
}

/// Values that can have an a-point chain of length at least 2: `f(w)` for
/// the exact Gaussian-rational roots `w` of `Δf`, together with `∞`.
pub fn long_value_candidates(f: &ExactRational) -> Result<Vec<Value>> {
    let df = f.delta(1);
    let mut out = Vec::new();
    if !df.is_zero() {
        let (exact, _) = split_rational_roots(df.num())?;
        for (w, _) in &exact.roots {
            if let Some(v) = f.eval(w) {
                out.push(Value::Finite(v));
            }
        }
    }
    out.push(Value::Infinity);
    out.sort();
    out.dedup();
    Ok(out)
}

/// The candidates (plus `∞`) whose a-points all sit in chains of length at
/// least 2. A value never taken is not reported.
pub fn complete_long_values(f: &ExactRational, candidates: &[Value], tol: &TolerancePolicy) -> Result<Vec<Value>> {
    if f.is_constant() {
        return Err(Error::precondition("f nonconstant", None));
    }
    let mut all: Vec<Value> = candidates.to_vec();
    all.push(Value::Infinity);
    all.sort();
    all.dedup();
    let mut out = Vec::new();
    for a in all {
        let (d, kind) = a_points(f, &a, tol)?;
        let dec = chain_decompose(&d, &Radius::new(d.covering_radius())?, kind);
        if !dec.chains.is_empty() && dec.chains.iter().all(|c| c.length >= 2) {
            out.push(a);
        }
    }
    Ok(out)
}

fn starts(d: &Divisor, kind: ChainKind, r: f64) -> Result<Vec<GaussianRational>> {
    let mut s: Vec<GaussianRational> =
        chain_decompose(d, &Radius::new(r)?, kind).chains.into_iter().map(|c| c.start).collect();
    s.sort();
    Ok(s)
}

/// Equal multisets of initial shifting a-points of `f` and `g` in the
/// closed disc of radius `r`, or in every disc when `r` is `None`. Only
/// start points are compared, so `z^{3↓}` and `z` share 0.
pub fn shifting_share(
    f: &ExactRational,
    g: &ExactRational,
    a: &Value,
    r: Option<f64>,
    tol: &TolerancePolicy,
) -> Result<bool> {
    let (df, kf) = a_points(f, a, tol)?;
    let (dg, kg) = a_points(g, a, tol)?;
    let radii = match r {
        Some(r) => vec![r],
        None => {
            // the start multiset only changes at moduli of points
            let mut ev: Vec<f64> = df.iter().chain(dg.iter()).map(|p| p.at.abs_f64()).collect();
            ev.push(0.0);
            ev.sort_by(f64::total_cmp);
            ev.dedup();
            let mut radii: Vec<f64> = ev.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            radii.extend(ev.iter().copied());
            radii.push(df.covering_radius().max(dg.covering_radius()));
            radii
        }
    };
    for r in radii {
        if starts(&df, kf, r)? != starts(&dg, kg, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiveValueReport {
    pub shared: Vec<Value>,
    pub identical: bool,
    /// False only if five or more values are shared by distinct functions.
    pub consistent: bool,
}

/// Which of `values` `f` and `g` shift-share over the whole plane.
pub fn five_value_report(
    f: &ExactRational,
    g: &ExactRational,
    values: &[Value],
    tol: &TolerancePolicy,
) -> Result<FiveValueReport> {
    let mut shared = Vec::new();
    for a in values {
        // a constant function equal to a has no a-point divisor
        let ok = match (f.sub_const_value(a), g.sub_const_value(a)) {
            (true, true) => true,
            (false, false) => shifting_share(f, g, a, None, tol)?,
            _ => false,
        };
        if ok {
            shared.push(a.clone());
        }
    }
    let identical = f == g;
    let consistent = identical || shared.len() < 5;
    Ok(FiveValueReport {
        shared,
        identical,
        consistent,
    })
}

impl ExactRational {
    fn sub_const_value(&self, a: &Value) -> bool {
        matches!(a, Value::Finite(a) if self.sub_const(a).is_zero())
    }
}
