use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{is_kind_at, Divisor, DivisorSource, Radius};
use crate::poly::FactoredPoly;
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Zero,
    Pole,
}

impl ChainKind {
    /// Direction a chain of this kind runs in: `+1` for zeros, `-1` for poles.
    pub fn step(self) -> i64 {
        match self {
            ChainKind::Zero => 1,
            ChainKind::Pole => -1,
        }
    }
}

/// `(z-start)^{length↓}` for zeros, `(z-start)^{-length↓}` for poles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chain {
    pub start: GaussianRational,
    pub length: u32,
    pub kind: ChainKind,
    /// The run continues past the disc boundary.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clipped: bool,
}

impl Chain {
    /// Points covered, in chain order.
    pub fn points(&self) -> impl Iterator<Item = GaussianRational> + '_ {
        let s = self.kind.step();
        (0..self.length as i64).map(move |k| self.start.add_int(s * k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainDecomposition {
    /// Sorted by start, then length.
    pub chains: Vec<Chain>,
    pub kind: ChainKind,
    pub radius: f64,
    /// Total multiplicity of this kind left outside the disc, when the
    /// source is finite. For a polynomial at a covering radius this is 0 and
    /// the chain-free factor is the leading constant.
    pub outside: Option<u64>,
}

impl ChainDecomposition {
    pub fn count(&self) -> usize {
        self.chains.len()
    }

    pub fn any_clipped(&self) -> bool {
        self.chains.iter().any(|c| c.clipped)
    }

    /// Multiplicity at each point, re-aggregated from the chains.
    pub fn coverage(&self) -> BTreeMap<GaussianRational, u32> {
        let mut m = BTreeMap::new();
        for c in &self.chains {
            for w in c.points() {
                *m.entry(w).or_insert(0) += 1;
            }
        }
        m
    }

    /// `(start, length)` pairs, the shape used by reports and tests.
    pub fn pairs(&self) -> Vec<(GaussianRational, u32)> {
        self.chains.iter().map(|c| (c.start.clone(), c.length)).collect()
    }
}

/// Greedy chain extraction in the closed disc `|z| <= r`.
pub fn chain_decompose(src: &dyn DivisorSource, r: &Radius, kind: ChainKind) -> ChainDecomposition {
    chain_decompose_with(src, r, kind, |_| 0)
}

/// As [`chain_decompose`], with `choose` picking which of the current chain
/// starts (given in ascending order) is stripped next. The chain multiset
/// does not depend on the choices made.
pub fn chain_decompose_with(
    src: &dyn DivisorSource,
    r: &Radius,
    kind: ChainKind,
    mut choose: impl FnMut(&[GaussianRational]) -> usize,
) -> ChainDecomposition {
    let step = kind.step();
    let mut left: BTreeMap<GaussianRational, u32> = src
        .points_within(r)
        .into_iter()
        .filter_map(|p| {
            let m = p.mult(kind);
            (m > 0).then_some((p.at, m))
        })
        .collect();

    let mut chains = Vec::new();
    loop {
        let starts: Vec<GaussianRational> = left
            .keys()
            .filter(|w| !left.contains_key(&w.add_int(-step)))
            .cloned()
            .collect();
        if starts.is_empty() {
            break;
        }
        let start = starts[choose(&starts).min(starts.len() - 1)].clone();
        let mut w = start.clone();
        let mut length = 0u32;
        while let Some(m) = left.get_mut(&w) {
            *m -= 1;
            if *m == 0 {
                left.remove(&w);
            }
            length += 1;
            w = w.add_int(step);
        }
        let clipped = !r.contains(&w) && is_kind_at(src, &w, kind);
        chains.push(Chain {
            start,
            length,
            kind,
            clipped,
        });
    }
    chains.sort();

    let outside = src.all_points().map(|all| {
        all.iter()
            .filter(|p| !r.contains(&p.at))
            .map(|p| p.mult(kind) as u64)
            .sum()
    });
    ChainDecomposition {
        chains,
        kind,
        radius: r.value(),
        outside,
    }
}

fn run_length(src: &dyn DivisorSource, z0: &GaussianRational, r: &Radius, kind: ChainKind) -> u32 {
    let mut n = 0u32;
    let mut w = z0.clone();
    while r.contains(&w) && is_kind_at(src, &w, kind) {
        n += 1;
        w = w.add_int(kind.step());
    }
    n
}

/// Number of consecutive zeros `z0, z0+1, …` inside the disc.
pub fn length_of_zero_at(src: &dyn DivisorSource, z0: &GaussianRational, r: &Radius) -> u32 {
    run_length(src, z0, r, ChainKind::Zero)
}

/// Number of consecutive poles `z0, z0-1, …` inside the disc.
pub fn length_of_pole_at(src: &dyn DivisorSource, z0: &GaussianRational, r: &Radius) -> u32 {
    run_length(src, z0, r, ChainKind::Pole)
}

/// `∏ (z - start)` over the zero chains of `p`, monic.
pub fn difference_radical(p: &FactoredPoly<GaussianRational>) -> FactoredPoly<GaussianRational> {
    let d = Divisor::from_factored(p);
    let r = Radius::new(d.covering_radius()).expect("finite");
    let mut roots: BTreeMap<GaussianRational, u32> = BTreeMap::new();
    for c in chain_decompose(&d, &r, ChainKind::Zero).chains {
        *roots.entry(c.start).or_insert(0) += 1;
    }
    FactoredPoly::lead_one(roots.into_iter().collect())
}

/// Product of the distinct linear factors, monic.
pub fn classic_radical(p: &FactoredPoly<GaussianRational>) -> FactoredPoly<GaussianRational> {
    let d = Divisor::from_factored(p);
    FactoredPoly::lead_one(d.iter().filter(|q| q.zmult > 0).map(|q| (q.at, 1)).collect())
}
