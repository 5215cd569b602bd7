//! Casorati determinants `det [f_j(z + i)]` of rational functions.

use crate::poly::Poly;
use crate::rational::RationalFunction;
use crate::scalar::Scalar;

fn lcm<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let g = a.gcd(b);
    (a * b).exact_div(&g).expect("gcd divides the product").monic()
}

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
pub fn bareiss_det<T: Scalar>(mut m: Vec<Vec<Poly<T>>>) -> Poly<T> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// `𝒞(f_1, …, f_m)(z) = det [f_j(z + i)]_{0 <= i, j < m}`.
///
/// Each row is lifted to polynomials over its own common denominator, the
/// polynomial determinant is taken fraction-free, and the row denominators
/// are divided back out.
pub fn casorati<T: Scalar>(fs: &[RationalFunction<T>]) -> RationalFunction<T> {
    let m = fs.len();
    if m == 0 {
        return RationalFunction::constant(T::one());
    }
    let mut rows = Vec::with_capacity(m);
    let mut den = Poly::one();
    for i in 0..m {
        let shifted: Vec<RationalFunction<T>> = fs.iter().map(|f| f.shift(&T::from_int(i as i64))).collect();
        let l = shifted.iter().fold(Poly::one(), |acc, f| lcm(&acc, f.den()));
        let row = shifted
            .iter()
            .map(|f| &l.exact_div(f.den()).expect("lcm is a multiple") * f.num())
            .collect::<Vec<_>>();
        rows.push(row);
        den = &den * &l;
    }
    RationalFunction::new(bareiss_det(rows), den).expect("nonzero denominator")
}

/// Linear independence over the constants, equivalent for rational
/// functions to independence over period-one functions: the Casorati
/// determinant is not identically zero.
pub fn linearly_independent<T: Scalar>(fs: &[RationalFunction<T>]) -> bool {
    !casorati(fs).is_zero()
}
