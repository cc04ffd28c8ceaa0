//! Real-root counting with Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::IntPolynomial;

/// A point of the extended real line.
#[derive(Clone, Debug)]
pub enum Point {
    NegInfinity,
    At(BigRational),
    PosInfinity,
}

fn sturm_sequence(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.is_zero() {
            seq.pop();
            break;
        }
        let delta = a.degree().unwrap_or(0) - b.degree().unwrap_or(0);
        let mut r = a.pseudo_rem(b);
        // prem multiplies by lc(b)^(delta + 1); undo its sign
        if b.leading().is_negative() && delta % 2 == 0 {
            r = -&r;
        }
        if r.is_zero() {
            break;
        }
        // Sturm uses the negated remainder, scaled by a positive constant
        let c = r.content();
        seq.push(-&r.div_exact(&c));
    }
    seq
}

fn sign_at(p: &IntPolynomial, at: &Point) -> i8 {
    let sign_of = |v: &BigInt| {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    match at {
        Point::PosInfinity => sign_of(&p.leading()),
        Point::NegInfinity => {
            let s = sign_of(&p.leading());
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }
        Point::At(x) => {
            let v = p.eval_rational(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn variations(seq: &[IntPolynomial], at: &Point) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign_at(p, at))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`.
pub fn count_real_roots(p: &IntPolynomial, a: &Point, b: &Point) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&p.squarefree_part());
    variations(&seq, a).saturating_sub(variations(&seq, b))
}

/// Number of distinct real roots of `p`.
pub fn count_all_real_roots(p: &IntPolynomial) -> usize {
    count_real_roots(p, &Point::NegInfinity, &Point::PosInfinity)
}

/// Whether every complex root of `p` is real and lies in `[-2 sqrt t,
/// 2 sqrt t]`.
///
/// The interval endpoints are irrational, so the test is made on the
/// polynomial whose roots are the squares of the roots of `p`: none of
/// those may exceed `4t`.
pub fn roots_within_hasse_interval(p: &IntPolynomial, t: u64) -> bool {
    let sqf = p.squarefree_part();
    let Some(d) = sqf.degree() else {
        return true;
    };
    if d == 0 {
        return true;
    }
    if count_all_real_roots(&sqf) != d {
        return false;
    }
    // g(x^2) = (-1)^d p(x) p(-x)
    let prod = &sqf * &sqf.reflect();
    let squares = IntPolynomial::new(prod.coeffs().iter().step_by(2).cloned().collect());
    let bound = Point::At(BigRational::from_integer(BigInt::from(4 * t)));
    count_real_roots(&squares, &bound, &Point::PosInfinity) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn at(n: i64) -> Point {
        Point::At(BigRational::from_integer(n.into()))
    }

    #[test]
    fn counts_roots_of_quadratics() {
        assert_eq!(count_all_real_roots(&p(&[-2, 0, 1])), 2);
        assert_eq!(count_all_real_roots(&p(&[2, 0, 1])), 0);
        assert_eq!(count_real_roots(&p(&[-2, 0, 1]), &at(0), &at(2)), 1);
        // (x - 1)^2 (x + 3) has two distinct roots
        let f = &p(&[-1, 1]).pow(2) * &p(&[3, 1]);
        assert_eq!(count_all_real_roots(&f), 2);
        assert_eq!(count_real_roots(&f, &at(-3), &at(1)), 1);
    }

    #[test]
    fn negative_leading_coefficient() {
        assert_eq!(count_all_real_roots(&p(&[2, 0, -1])), 2);
        assert_eq!(count_all_real_roots(&p(&[6, -11, 6, -1])), 3);
    }

    #[test]
    fn hasse_interval() {
        // 2 sqrt 3 = 3.46...
        assert!(roots_within_hasse_interval(&p(&[-2, 0, 1]), 3));
        assert!(roots_within_hasse_interval(&p(&[-12 + 1, 0, 1]), 3)); // +-sqrt 11
        assert!(!roots_within_hasse_interval(&p(&[-13, 0, 1]), 3)); // +-sqrt 13
        assert!(!roots_within_hasse_interval(&p(&[1, 0, 1]), 3)); // not real
        assert!(!roots_within_hasse_interval(&p(&[4, 1]), 3)); // -4
        assert!(roots_within_hasse_interval(&p(&[0, 1]), 3));
    }
}
