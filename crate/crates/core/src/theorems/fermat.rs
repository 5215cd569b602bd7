use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::abc::pairwise_prime_precondition;
use super::Precondition;
use crate::divisor::{Divisor, DivisorPoint, DivisorSource, Radius};
use crate::error::{Error, Result};
use crate::poly::TolerancePolicy;
use crate::scalar::GaussianRational;
use crate::ExactPoly;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermatInstance {
    pub a: String,
    pub b: String,
    pub c: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FermatVerdict {
    Valid,
    /// `a^{n↓} + b^{n↓} - c^{n↓}` is nonzero at the integer `at`.
    IdentityFails { at: i64, residual: String },
    PreconditionFails(Precondition),
}

/// Divisor of `p(z) p(z-1) ⋯ p(z-n+1)` from the divisor of `p`.
fn falling_divisor(d: &Divisor, n: usize) -> Divisor {
    Divisor::from_points(
        (0..n as i64).flat_map(|k| d.iter().map(move |p| DivisorPoint { at: p.at.add_int(k), ..p })),
    )
}

/// Checks `a^{n↓} + b^{n↓} = c^{n↓}` exactly, then the hypotheses: not all
/// constant, none zero, and the falling powers pairwise shifting prime.
pub fn fermat_check(a: &ExactPoly, b: &ExactPoly, c: &ExactPoly, n: usize, tol: &TolerancePolicy) -> Result<FermatVerdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let fs = [a, b, c];
    let pre = [
        Precondition::new("not all constants", fs.iter().any(|f| !f.is_constant()), None),
        Precondition::new(
            "no function identically zero",
            fs.iter().all(|f| !f.is_zero()),
            fs.iter().position(|f| f.is_zero()).map(|k| ["a", "b", "c"][k].to_string()),
        ),
    ];
    if let Some(p) = pre.iter().find(|p| !p.holds) {
        return Ok(FermatVerdict::PreconditionFails(p.clone()));
    }
    let diff = &(&a.fall_expr(n) + &b.fall_expr(n)) - &c.fall_expr(n);
    if !diff.is_zero() {
        // a nonzero polynomial of degree d has a nonzero value among 0..=d
        let at = (0..=diff.deg() as i64)
            .find(|&t| !diff.eval(&GaussianRational::from_ints(t, 0)).is_zero())
            .expect("nonzero polynomial");
        let residual = diff.eval(&GaussianRational::from_ints(at, 0)).to_string();
        return Ok(FermatVerdict::IdentityFails { at, residual });
    }
    let ds: Vec<Divisor> = fs
        .iter()
        .map(|f| Divisor::of_poly(f, tol).map(|d| falling_divisor(&d, n)))
        .collect::<Result<_>>()?;
    let reach = ds.iter().map(Divisor::covering_radius).fold(1.0, f64::max);
    let refs: Vec<&dyn DivisorSource> = ds.iter().map(|d| d as &dyn DivisorSource).collect();
    let names = ["a^n".to_string(), "b^n".to_string(), "c^n".to_string()];
    let p = pairwise_prime_precondition(&names, &refs, &Radius::new(reach)?);
    Ok(if p.holds {
        FermatVerdict::Valid
    } else {
        FermatVerdict::PreconditionFails(p)
    })
}

/// Search box: every polynomial of degree at most `max_degree` with
/// Gaussian-integer coefficients whose parts lie in `[-coeff_bound,
/// coeff_bound]`, except 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FermatBounds {
    pub max_degree: usize,
    pub coeff_bound: i64,
    /// Stop after this many admissible instances.
    pub limit: Option<usize>,
    /// Visit the outer loop in a shuffled order; the result is the same.
    pub shuffle_seed: Option<u64>,
}

impl Default for FermatBounds {
    fn default() -> Self {
        Self {
            max_degree: 2,
            coeff_bound: 3,
            limit: Some(1000),
            shuffle_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermatSearch {
    pub n: usize,
    pub bounds: FermatBounds,
    pub polynomials: usize,
    /// Pairs `(a, b)` compared after symmetry reduction.
    pub pairs_examined: u64,
    /// Triples satisfying the identity before the precondition filter.
    pub identity_hits: u64,
    /// One representative per orbit under units, conjugation and `a <-> b`.
    pub instances: Vec<FermatInstance>,
    pub truncated: bool,
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    let m = a as u128 * b as u128;
    let r = ((m & P as u128) + (m >> 61)) as u64;
    if r >= P {
        r - P
    } else {
        r
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

/// Element of `ℤ[i] / (2^61 - 1)`, a field since the prime is 3 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Gm(u64, u64);

impl Gm {
    fn mul(self, o: Gm) -> Gm {
        let re = addmod(mulmod(self.0, o.0), P - mulmod(self.1, o.1));
        let im = addmod(mulmod(self.0, o.1), mulmod(self.1, o.0));
        Gm(re, im)
    }

    fn add(self, o: Gm) -> Gm {
        Gm(addmod(self.0, o.0), addmod(self.1, o.1))
    }

    fn bucket(self, bits: u32) -> usize {
        let h = self.0.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ self.1.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        (h >> (64 - bits)) as usize
    }
}

/// Indexing of the search box. A coefficient `(re, im)` is the digit
/// `(re + B)(2B + 1) + (im + B)`; a polynomial is its base-`(2B+1)²`
/// digit string, constant term first.
struct SearchBox {
    bound: i64,
    side: i64,
    digits: usize,
    count: usize,
}

impl SearchBox {
    fn new(b: &FermatBounds) -> Result<Self> {
        if b.coeff_bound < 0 {
            return Err(Error::InvalidArgument("coeff_bound must be >= 0".into()));
        }
        let side = 2 * b.coeff_bound + 1;
        let base = (side * side) as u128;
        let count = base
            .checked_pow(b.max_degree as u32 + 1)
            .filter(|&c| c <= 1 << 23)
            .ok_or_else(|| Error::InvalidArgument("search box exceeds 2^23 polynomials".into()))?;
        Ok(Self {
            bound: b.coeff_bound,
            side,
            digits: b.max_degree + 1,
            count: count as usize,
        })
    }

    fn base(&self) -> usize {
        (self.side * self.side) as usize
    }

    fn coeffs(&self, mut idx: usize) -> Vec<(i64, i64)> {
        (0..self.digits)
            .map(|_| {
                let d = (idx % self.base()) as i64;
                idx /= self.base();
                (d / self.side - self.bound, d % self.side - self.bound)
            })
            .collect()
    }

    fn index(&self, cs: &[(i64, i64)]) -> usize {
        cs.iter()
            .rev()
            .fold(0, |acc, (re, im)| acc * self.base() + ((re + self.bound) * self.side + im + self.bound) as usize)
    }

    fn zero_index(&self) -> usize {
        self.index(&vec![(0, 0); self.digits])
    }

    fn poly(&self, idx: usize) -> ExactPoly {
        ExactPoly::new(self.coeffs(idx).into_iter().map(|(re, im)| GaussianRational::from_ints(re, im)).collect())
    }

    /// Images under multiplication by `i^k` and optional conjugation.
    fn images(&self, idx: usize) -> [usize; 8] {
        let cs = self.coeffs(idx);
        let mut out = [0; 8];
        for (g, slot) in out.iter_mut().enumerate() {
            let img: Vec<(i64, i64)> = cs
                .iter()
                .map(|&(re, im)| {
                    let (re, im) = if g >= 4 { (re, -im) } else { (re, im) };
                    (0..g % 4).fold((re, im), |(x, y), _| (-y, x))
                })
                .collect();
            *slot = self.index(&img);
        }
        out
    }

    /// `p(t) p(t-1) ⋯ p(t-n+1)` modulo the prime.
    fn fingerprint(&self, idx: usize, n: usize, t: i64) -> Gm {
        let cs: Vec<Gm> = self.coeffs(idx).into_iter().map(|(re, im)| Gm(to_mod(re), to_mod(im))).collect();
        (0..n as i64).fold(Gm(1, 0), |acc, k| {
            let x = Gm(to_mod(t - k), 0);
            let v = cs.iter().rev().fold(Gm(0, 0), |v, c| v.mul(x).add(*c));
            acc.mul(v)
        })
    }
}

/// Exhaustive search for admissible `a^{n↓} + b^{n↓} = c^{n↓}` in the box.
///
/// Each `c^{n↓}` is fingerprinted by its value at a large integer modulo
/// `2^61 - 1`; pairs `(a, b)` are matched through a bitset prefilter and a
/// hash table, and every match is confirmed exactly and then run through
/// [`fermat_check`]. The symmetry group (units, conjugation, swap) reduces
/// the pairs: `a` ranges over orbit minima and `b` over polynomials whose
/// orbit minimum is at least `a`.
pub fn fermat_search(bounds: &FermatBounds, n: usize, tol: &TolerancePolicy) -> Result<FermatSearch> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let sb = SearchBox::new(bounds)?;
    let zero = sb.zero_index();
    let t = 1_000_003;
    let fp: Vec<Gm> = (0..sb.count).map(|i| sb.fingerprint(i, n, t)).collect();
    let images: Vec<[usize; 8]> = (0..sb.count).map(|i| sb.images(i)).collect();
    let rep: Vec<usize> = images.iter().map(|im| *im.iter().min().expect("8 images")).collect();

    const BITS: u32 = 24;
    let mut bitset = vec![0u64; 1 << (BITS - 6)];
    let mut table: HashMap<Gm, Vec<u32>> = HashMap::new();
    for (i, f) in fp.iter().enumerate() {
        if i == zero {
            continue;
        }
        let h = f.bucket(BITS);
        bitset[h >> 6] |= 1 << (h & 63);
        table.entry(*f).or_default().push(i as u32);
    }

    let mut outer: Vec<usize> = (0..sb.count).filter(|&i| i != zero && rep[i] == i).collect();
    if let Some(seed) = bounds.shuffle_seed {
        outer.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let mut pairs = 0u64;
    let mut hits = 0u64;
    let mut found: BTreeSet<[usize; 3]> = BTreeSet::new();
    let mut truncated = false;
    'outer: for &a in &outer {
        for b in 0..sb.count {
            if b == zero || rep[b] < a {
                continue;
            }
            pairs += 1;
            let s = fp[a].add(fp[b]);
            let h = s.bucket(BITS);
            if bitset[h >> 6] & (1 << (h & 63)) == 0 {
                continue;
            }
            let Some(cs) = table.get(&s) else { continue };
            for &c in cs {
                let (pa, pb, pc) = (sb.poly(a), sb.poly(b), sb.poly(c as usize));
                let verdict = fermat_check(&pa, &pb, &pc, n, tol)?;
                if matches!(verdict, FermatVerdict::IdentityFails { .. }) {
                    continue;
                }
                hits += 1;
                if verdict == FermatVerdict::Valid {
                    found.insert(canonical_triple(&images, [a, b, c as usize]));
                    if bounds.limit.is_some_and(|l| found.len() >= l) {
                        truncated = true;
                        break 'outer;
                    }
                }
            }
        }
    }

    let instances = found
        .into_iter()
        .map(|[a, b, c]| FermatInstance {
            a: sb.poly(a).to_string(),
            b: sb.poly(b).to_string(),
            c: sb.poly(c).to_string(),
            n,
        })
        .collect();
    Ok(FermatSearch {
        n,
        bounds: bounds.clone(),
        polynomials: sb.count - 1,
        pairs_examined: pairs,
        identity_hits: hits,
        instances,
        truncated,
    })
}

/// Least index triple in the orbit of `(a, b, c)` under the 8 symmetries
/// and the swap of `a` and `b`.
fn canonical_triple(images: &[[usize; 8]], [a, b, c]: [usize; 3]) -> [usize; 3] {
    (0..8)
        .flat_map(|g| {
            let (x, y, z) = (images[a][g], images[b][g], images[c][g]);
            [[x, y, z], [y, x, z]]
        })
        .min()
        .expect("nonempty orbit")
}
