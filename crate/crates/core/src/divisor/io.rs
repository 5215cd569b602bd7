//! JSON exchange format for divisors.
//!
//! A file is either a bare list of points
//! `[{"re": "p/q", "im": "p/q", "zmult": 1, "pmult": 0}, …]`
//! or an object `{"points": [...], "lattices": [...]}` where each lattice is
//! `{"re", "im", "direction": "forward"|"backward"|"both", "mult", "kind"}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ChainKind, Divisor, DivisorPoint, DivisorSource, LatticeDirection, LatticeSource, ProductSource};
use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    #[serde(flatten)]
    pub anchor: GaussianRational,
    pub direction: LatticeDirection,
    #[serde(default = "one")]
    pub mult: u32,
    pub kind: ChainKind,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorFile {
    Points(Vec<DivisorPoint>),
    Mixed {
        #[serde(default)]
        points: Vec<DivisorPoint>,
        #[serde(default)]
        lattices: Vec<LatticeSpec>,
    },
}

impl DivisorFile {
    pub fn parse(json: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(json).map_err(|e| Error::InvalidArgument(format!("divisor JSON: {e}")))?;
        for p in f.points() {
            if p.zmult > 0 && p.pmult > 0 {
                return Err(Error::InvalidArgument(format!(
                    "point {} is both a zero and a pole",
                    p.at
                )));
            }
        }
        Ok(f)
    }

    pub fn from_divisor(d: &Divisor) -> Self {
        Self::Points(d.iter().collect())
    }

    pub fn points(&self) -> &[DivisorPoint] {
        match self {
            Self::Points(p) | Self::Mixed { points: p, .. } => p,
        }
    }

    pub fn lattices(&self) -> &[LatticeSpec] {
        match self {
            Self::Points(_) => &[],
            Self::Mixed { lattices, .. } => lattices,
        }
    }

    pub fn to_source(&self) -> Arc<dyn DivisorSource> {
        let finite = Divisor::from_points(self.points().iter().cloned());
        if self.lattices().is_empty() {
            return Arc::new(finite);
        }
        let mut s = ProductSource::new(vec![Arc::new(finite)]);
        for l in self.lattices() {
            s.push(Arc::new(LatticeSource {
                anchor: l.anchor.clone(),
                direction: l.direction,
                mult: l.mult,
                kind: l.kind,
            }));
        }
        Arc::new(s)
    }
}
