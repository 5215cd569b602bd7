//! Turning numerically located roots into exact divisor points.
//!
//! Counting only depends on which points coincide and which differ by
//! exactly 1. Roots outside `ℚ(i)` are therefore replaced by exact stand-ins
//! that keep those relations: a root within `unit_gap_eps` of `β ± 1` for an
//! already placed `β` becomes exactly `β ± 1`, and each remaining group of
//! unit-linked roots is placed at a dyadic base plus integers.

use num_complex::Complex64;

use super::{Divisor, DivisorPoint};
use crate::error::Result;
use crate::poly::{roots_numeric, split_rational_roots, TolerancePolicy};
use crate::scalar::{GaussianRational, Scalar};
use crate::{ExactPoly, ExactRational};

const SNAP_BITS: u32 = 40;

#[derive(Debug, Clone)]
struct Loose {
    z: Complex64,
    zmult: u32,
    pmult: u32,
}

/// Accumulates zeros and poles, exact or numeric, into one [`Divisor`].
#[derive(Debug, Clone)]
pub struct DivisorBuilder {
    tol: TolerancePolicy,
    exact: Vec<DivisorPoint>,
    loose: Vec<Loose>,
}

impl DivisorBuilder {
    pub fn new(tol: TolerancePolicy) -> Self {
        Self {
            tol,
            exact: Vec::new(),
            loose: Vec::new(),
        }
    }

    pub fn add_point(&mut self, p: DivisorPoint) {
        self.exact.push(p);
    }

    fn add_poly(&mut self, p: &ExactPoly, pole: bool) -> Result<()> {
        if p.is_constant() {
            return if p.is_zero() { Err(crate::Error::ZeroPolynomial) } else { Ok(()) };
        }
        let (fp, rest) = split_rational_roots(p)?;
        for (w, m) in fp.roots {
            self.exact.push(if pole { DivisorPoint::pole(w, m) } else { DivisorPoint::zero(w, m) });
        }
        if rest.deg() > 0 {
            for (z, m) in roots_numeric(&rest, &self.tol)?.roots {
                let (zmult, pmult) = if pole { (0, m) } else { (m, 0) };
                self.loose.push(Loose { z, zmult, pmult });
            }
        }
        Ok(())
    }

    pub fn add_zeros_of(&mut self, p: &ExactPoly) -> Result<()> {
        self.add_poly(p, false)
    }

    pub fn add_poles_of(&mut self, p: &ExactPoly) -> Result<()> {
        self.add_poly(p, true)
    }

    pub fn add_rational(&mut self, f: &ExactRational) -> Result<()> {
        self.add_zeros_of(f.num())?;
        self.add_poles_of(f.den())
    }

    pub fn build(self) -> Result<Divisor> {
        self.tol.validate()?;
        let eps = self.tol.unit_gap_eps;
        let mut placed: Vec<(GaussianRational, Complex64)> =
            self.exact.iter().map(|p| (p.at.clone(), p.at.to_complex64())).collect();
        let mut pending: Vec<Option<Loose>> = self.loose.into_iter().map(Some).collect();
        let mut out = self.exact;

        let mut place = |w: GaussianRational, l: Loose, placed: &mut Vec<(GaussianRational, Complex64)>| {
            placed.push((w.clone(), l.z));
            out.push(DivisorPoint {
                at: w,
                zmult: l.zmult,
                pmult: l.pmult,
            });
        };

        loop {
            // Link pending roots to placed neighbours until nothing moves.
            let mut moved = true;
            while moved {
                moved = false;
                for slot in pending.iter_mut() {
                    let Some(l) = slot.as_ref() else { continue };
                    let link = placed.iter().find_map(|(w, wz)| {
                        [1i64, -1, 0]
                            .into_iter()
                            .find(|&k| {
                                let tol = if k == 0 { self.tol.root_eps } else { eps };
                                (l.z - (wz + k as f64)).norm() <= tol
                            })
                            .map(|k| w.add_int(k))
                    });
                    if let Some(w) = link {
                        let l = slot.take().expect("checked");
                        place(w, l, &mut placed);
                        moved = true;
                    }
                }
            }
            // Seed a new group from the first unplaced root.
            let Some(l) = pending.iter_mut().find_map(|s| s.take()) else { break };
            let base = GaussianRational::from_f64_rounded(l.z, SNAP_BITS);
            place(base, l, &mut placed);
        }
        drop(place);
        Ok(Divisor::from_points(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{chain_decompose, ChainKind, DivisorSource, Radius};
    use num_traits::Zero;

    fn p(c: &[i64]) -> ExactPoly {
        ExactPoly::from_ints(c)
    }

    #[test]
    fn exact_roots_stay_exact() {
        let d = Divisor::of_poly(&p(&[0, -1, 1]), &TolerancePolicy::default()).unwrap();
        assert_eq!(d.order_at(&GaussianRational::from_ints(1, 0)), (1, 0));
    }

    #[test]
    fn irrational_unit_shift_is_linked() {
        // (z^2-2)((z-1)^2-2): roots ±√2 and 1±√2, two chains of length 2
        let a = p(&[-2, 0, 1]);
        let b = a.shift_int(-1);
        let d = Divisor::of_poly(&(&a * &b), &TolerancePolicy::default()).unwrap();
        assert_eq!(d.len(), 4);
        let c = chain_decompose(&d, &Radius::new(10.0).unwrap(), ChainKind::Zero);
        assert_eq!(c.count(), 2);
        assert!(c.chains.iter().all(|c| c.length == 2));
    }

    #[test]
    fn repeated_irrational_roots_keep_multiplicity() {
        let f = &p(&[1, 1, 1]) * &p(&[1, 1, 1]);
        let d = Divisor::of_poly(&f, &TolerancePolicy::default()).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|q| q.zmult == 2));
    }

    #[test]
    fn rational_function_divisor() {
        let q = p(&[-2, 0, 1]);
        let f = ExactRational::new(q.clone(), &q * &p(&[0, 1])).unwrap();
        let d = Divisor::of_rational(&f, &TolerancePolicy::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.order_at(&GaussianRational::zero()), (0, 1));
    }
}
