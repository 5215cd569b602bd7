use super::{is_kind_at, ChainKind, DivisorSource, Radius};
use crate::scalar::GaussianRational;

/// Outcome of a shifting-primeness test. On failure `witness` is a pair
/// `(w, w+1)` of zeros, one from each function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftPrime {
    pub prime: bool,
    pub witness: Option<(GaussianRational, GaussianRational)>,
}

fn adjacent(a: &dyn DivisorSource, b: &dyn DivisorSource, r: &Radius) -> Option<GaussianRational> {
    a.points_within(r)
        .into_iter()
        .filter(|p| p.zmult > 0)
        .map(|p| p.at)
        .find(|w| {
            let next = w.add_int(1);
            r.contains(&next) && is_kind_at(b, &next, ChainKind::Zero)
        })
}

/// `f` and `g` share no shifting common divisor inside the disc: there is
/// no zero `w` of one with `w+1` a zero of the other. Zeros at the same
/// point with no such neighbour are allowed.
pub fn relatively_shifting_prime(f: &dyn DivisorSource, g: &dyn DivisorSource, r: &Radius) -> ShiftPrime {
    let hit = adjacent(f, g, r).or_else(|| adjacent(g, f, r));
    ShiftPrime {
        prime: hit.is_none(),
        witness: hit.map(|w| {
            let n = w.add_int(1);
            (w, n)
        }),
    }
}

/// All-pairs fold of [`relatively_shifting_prime`]; returns the first
/// failing pair of indices with its witness.
pub fn pairwise_shifting_prime(
    fs: &[&dyn DivisorSource],
    r: &Radius,
) -> Result<(), (usize, usize, (GaussianRational, GaussianRational))> {
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let t = relatively_shifting_prime(fs[i], fs[j], r);
            if let Some(w) = t.witness {
                return Err((i, j, w));
            }
        }
    }
    Ok(())
}
