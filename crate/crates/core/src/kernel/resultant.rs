//! Resultants of integer polynomials.
//!
//! Sign convention: `Res(f, g) = lc(f)^deg(g) * prod g(alpha)` over the
//! roots `alpha` of `f`, which equals the determinant of the Sylvester
//! matrix with the `deg(g)` shifted rows of `f` on top. Under this
//! convention `Res(g, f) = (-1)^(deg f * deg g) * Res(f, g)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Above this degree the subresultant sequence is used instead of the
/// Sylvester determinant.
pub const SYLVESTER_MAX_DEGREE: usize = 8;

/// Resultant of `f` and `g`.
///
/// Zero exactly when `f` and `g` share a nonconstant factor. A zero
/// polynomial against a nonzero one gives zero; two zero polynomials are
/// rejected.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::invalid("resultant of two zero polynomials"));
    }
    let max_deg = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
    if max_deg <= SYLVESTER_MAX_DEGREE {
        sylvester_resultant(f, g)
    } else {
        subresultant(f, g)
    }
}

/// Resultant by the subresultant pseudo-remainder sequence.
pub fn subresultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::invalid("resultant of two zero polynomials"));
    }
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok(BigInt::zero());
    };
    if df == 0 {
        return Ok(f.leading().pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.leading().pow(df as u32));
    }

    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_exact(&ca);
    let mut b = g.div_exact(&cb);
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    let mut sign = BigInt::one();
    let mut gg = BigInt::one();
    let mut h = BigInt::one();

    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            sign = -sign;
        }
    }

    loop {
        let da = a.degree().expect("nonzero");
        let db = b.degree().expect("nonzero");
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        b = r.div_exact(&(&gg * h.pow(delta as u32)));
        gg = a.leading();
        // h <- h^(1 - delta) * g^delta, exact
        h = if delta == 0 {
            h
        } else {
            let num = gg.pow(delta as u32);
            let den = h.pow(delta as u32 - 1);
            exact_div(&num, &den)
        };
        if b.degree() == Some(0) {
            break;
        }
    }

    let da = a.degree().expect("nonzero");
    let lb = b.leading();
    let h_final = if da == 0 {
        h
    } else {
        exact_div(&lb.pow(da as u32), &h.pow(da as u32 - 1))
    };
    Ok(sign * t * h_final)
}

fn exact_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    debug_assert!(r.is_zero(), "subresultant division not exact");
    q
}

/// Resultant as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::invalid("resultant of two zero polynomials"));
    }
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok(BigInt::zero());
    };
    if df == 0 {
        return Ok(f.leading().pow(dg as u32));
    }
    if dg == 0 {
        return Ok(g.leading().pow(df as u32));
    }
    Ok(bareiss_determinant(sylvester_matrix(f, g)))
}

/// Rows `0..deg g` hold shifted coefficients of `f`, rows `deg g..` those
/// of `g`, both highest degree first.
pub fn sylvester_matrix(f: &IntPolynomial, g: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let df = f.degree().unwrap_or(0);
    let dg = g.degree().unwrap_or(0);
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..dg {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            m[dg + i][i + k] = c.clone();
        }
    }
    m
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = exact_div(&v, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign.is_negative() {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn linear_pair() {
        assert_eq!(
            resultant(&p(&[-2, 1]), &p(&[-5, 1])).unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(
            subresultant(&p(&[-2, 1]), &p(&[-5, 1])).unwrap(),
            BigInt::from(-3)
        );
    }

    #[test]
    fn shared_roots_give_zero() {
        assert!(resultant(&p(&[-2, 0, 1]), &p(&[-2, 0, 1]))
            .unwrap()
            .is_zero());
        assert!(subresultant(&p(&[-2, 0, 1]), &p(&[-2, 0, 1]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn sqrt2_against_2sqrt2() {
        let f = p(&[-2, 0, 1]);
        let g = p(&[-8, 0, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), BigInt::from(36));
        assert_eq!(subresultant(&f, &g).unwrap(), BigInt::from(36));
    }

    #[test]
    fn both_zero_is_rejected() {
        assert!(matches!(
            resultant(&IntPolynomial::zero(), &IntPolynomial::zero()),
            Err(Error::InvalidInput(_))
        ));
        assert!(resultant(&IntPolynomial::zero(), &p(&[1, 1]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn constants() {
        assert_eq!(
            resultant(&p(&[3]), &p(&[1, 0, 1])).unwrap(),
            BigInt::from(9)
        );
        assert_eq!(
            resultant(&p(&[1, 0, 1]), &p(&[-2])).unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn swap_sign() {
        // deg 1 * deg 2 is even, deg 1 * deg 1 is odd
        let f = p(&[-2, 1]);
        let g = p(&[-5, 1]);
        assert_eq!(resultant(&g, &f).unwrap(), BigInt::from(3));
        let h = p(&[1, 2, 3]);
        assert_eq!(resultant(&f, &h).unwrap(), resultant(&h, &f).unwrap());
    }

    #[test]
    fn routes_agree_above_dispatch_degree() {
        // (x - 1)^9 + x and x^10 - 3x + 7
        let f = &p(&[-1, 1]).pow(9) + &p(&[0, 1]);
        let g = p(&[7, -3, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(
            subresultant(&f, &g).unwrap(),
            sylvester_resultant(&f, &g).unwrap()
        );
    }
}
