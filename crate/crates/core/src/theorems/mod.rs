//! Executable checks of the difference abc, m-term, second main theorem
//! and Fermat-type statements, reported as margin curves.

mod abc;
mod fermat;
mod values;

pub use abc::{
    admissible_abc_corpus, admissible_mterm_instance, verify_entire_abc, verify_m_term, verify_poly_abc,
    AbcInput, EntireAbcOptions,
};
pub use fermat::{fermat_check, fermat_search, FermatBounds, FermatInstance, FermatSearch, FermatVerdict};
pub use values::{
    complete_long_values, five_value_report, long_value_candidates, shifting_share, smt_report, FiveValueReport,
    SmtReport,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::counting::log_grid;
use crate::error::{Error, Result};

/// Geometric radius grid: 4 points from 10 to 10⁴ by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_min: 10.0,
            r_max: 1e4,
            points: 4,
        }
    }
}

impl GridSpec {
    pub fn radii(&self) -> Result<Vec<f64>> {
        if !(self.r_min > 0.0 && self.r_max >= self.r_min && self.r_max.is_finite()) || self.points == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid needs 0 < r_min <= r_max < inf and points >= 1, got {self:?}"
            )));
        }
        Ok(log_grid(self.r_min, self.r_max, self.points))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Precondition {
    pub fn new(name: &str, holds: bool, witness: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            holds,
            witness,
        }
    }
}

/// Fails with the first precondition that does not hold.
pub(crate) fn gate(pre: &[Precondition]) -> Result<()> {
    match pre.iter().find(|p| !p.holds) {
        Some(p) => Err(Error::precondition(p.name.clone(), p.witness.clone())),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginReport {
    pub theorem: String,
    pub inputs: BTreeMap<String, String>,
    pub grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub margin: Vec<f64>,
    pub preconditions: Vec<Precondition>,
    /// Margins down to `-tolerance` count as holding.
    pub tolerance: f64,
    /// Radii where the margin is below `-tolerance`.
    pub violations: Vec<f64>,
    pub verdict: Verdict,
}

impl MarginReport {
    /// Quadrature-based report: a failure confined to one decade of radii
    /// is inconclusive, since the theorems allow an exceptional set.
    pub fn from_curves(
        theorem: &str,
        inputs: BTreeMap<String, String>,
        grid: Vec<f64>,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        preconditions: Vec<Precondition>,
        tolerance: f64,
    ) -> Self {
        let margin: Vec<f64> = rhs.iter().zip(&lhs).map(|(r, l)| r - l).collect();
        let violations: Vec<f64> = grid
            .iter()
            .zip(&margin)
            .filter(|(_, m)| !(**m >= -tolerance))
            .map(|(r, _)| *r)
            .collect();
        let decades: std::collections::BTreeSet<i64> = violations.iter().map(|r| r.log10().floor() as i64).collect();
        let mut verdict = if violations.is_empty() {
            Verdict::Holds
        } else if decades.len() >= 2 {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        if verdict == Verdict::Holds && preconditions.iter().any(|p| !p.holds) {
            verdict = Verdict::Inconclusive;
        }
        Self {
            theorem: theorem.to_string(),
            inputs,
            grid,
            lhs,
            rhs,
            margin,
            preconditions,
            tolerance,
            violations,
            verdict,
        }
    }

    /// Exact comparison: any negative margin is a violation.
    pub fn exact(
        theorem: &str,
        inputs: BTreeMap<String, String>,
        grid: Vec<f64>,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        preconditions: Vec<Precondition>,
    ) -> Self {
        let mut rep = Self::from_curves(theorem, inputs, grid, lhs, rhs, preconditions, 0.0);
        if !rep.violations.is_empty() {
            rep.verdict = Verdict::Violated;
        }
        rep
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

pub(crate) fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
