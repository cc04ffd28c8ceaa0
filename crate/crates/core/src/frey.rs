//! The Q-curve `E_(A,B): y^2 = x^3 + 2(1+i)A x^2 + (-B^2 + iA^2) x` over
//! `Q(i)` and its Frobenius data at odd primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::factor::{is_prime_u64, pow_mod};
use crate::kernel::GaussianInteger;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveOverQi {
    pub a2: GaussianInteger,
    pub a4: GaussianInteger,
    pub a: i64,
    pub b: i64,
}

impl fmt::Display for EllipticCurveOverQi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3")?;
        if !self.a2.is_zero() {
            write!(f, " + ({})x^2", self.a2)?;
        }
        if !self.a4.is_zero() {
            write!(f, " + ({})x", self.a4)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn splitting_of(t: u64) -> Splitting {
    match t % 4 {
        1 => Splitting::Split,
        3 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusDatum {
    pub t: u64,
    pub splitting: Splitting,
    pub field_size: u64,
    pub point_count: u64,
    pub trace: i64,
}

impl FrobeniusDatum {
    pub fn satisfies_hasse(&self) -> bool {
        let tr = self.trace.unsigned_abs();
        tr * tr <= 4 * self.field_size
    }
}

/// The curve attached to a primitive solution, with `A` even.
pub fn build_curve(a: i64, b: i64) -> Result<EllipticCurveOverQi> {
    if a % 2 != 0 {
        return Err(Error::invalid(format!("A = {a} must be even")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {b}) != 1")));
    }
    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
    Ok(EllipticCurveOverQi {
        a2: GaussianInteger::new(2 * &ab, 2 * &ab),
        a4: GaussianInteger::new(-(&bb * &bb), &ab * &ab),
        a,
        b,
    })
}

/// `16 a4^2 (a2^2 - 4 a4)`.
pub fn discriminant(curve: &EllipticCurveOverQi) -> GaussianInteger {
    let a4sq = &curve.a4 * &curve.a4;
    let inner = &(&curve.a2 * &curve.a2) - &(BigInt::from(4) * &curve.a4);
    BigInt::from(16) * &(&a4sq * &inner)
}

/// `64 (iA^2 - B^2)^2 (iA^2 + B^2)`, the factored form of the discriminant.
pub fn discriminant_factored(a: i64, b: i64) -> GaussianInteger {
    let (a2, b2) = (BigInt::from(a).pow(2), BigInt::from(b).pow(2));
    let minus = GaussianInteger::new(-&b2, a2.clone());
    let plus = GaussianInteger::new(b2, a2);
    BigInt::from(64) * &(&(&minus * &minus) * &plus)
}

/// Arithmetic modulo an odd prime `t`, optionally extended by `i`.
struct Residue {
    t: u64,
    // Some(s): F_t with i = s. None: F_t[i] / (i^2 + 1)
    sqrt_minus_one: Option<u64>,
}

type Elt = (u64, u64);

impl Residue {
    fn size(&self) -> u64 {
        match self.sqrt_minus_one {
            Some(_) => self.t,
            None => self.t * self.t,
        }
    }

    fn reduce(&self, z: &GaussianInteger) -> Elt {
        let tb = BigInt::from(self.t);
        let re = z.re.mod_floor(&tb).to_u64().unwrap();
        let im = z.im.mod_floor(&tb).to_u64().unwrap();
        match self.sqrt_minus_one {
            Some(s) => ((re + im * s) % self.t, 0),
            None => (re, im),
        }
    }

    fn add(&self, x: Elt, y: Elt) -> Elt {
        ((x.0 + y.0) % self.t, (x.1 + y.1) % self.t)
    }

    fn mul(&self, x: Elt, y: Elt) -> Elt {
        let t = self.t;
        let re = (x.0 * y.0 + (t - x.1 * y.1 % t)) % t;
        let im = (x.0 * y.1 + x.1 * y.0) % t;
        (re, im)
    }

    fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        let t = self.t;
        let im_range = if self.sqrt_minus_one.is_some() { 1 } else { t };
        (0..im_range).flat_map(move |im| (0..t).map(move |re| (re, im)))
    }

    fn index(&self, x: Elt) -> usize {
        (x.0 + x.1 * self.t) as usize
    }
}

/// The square root of -1 mod `t` used to fix the prime above a split `t`:
/// the smallest `s` in `[1, t)` with `s^2 = -1`.
pub fn canonical_sqrt_minus_one(t: u64) -> Result<u64> {
    if t % 4 != 1 || !is_prime_u64(t) {
        return Err(Error::invalid(format!("{t} is not a prime = 1 mod 4")));
    }
    Ok((1..t)
        .find(|&s| s * s % t == t - 1)
        .expect("-1 is a square mod t"))
}

/// Both square roots of -1 mod a split prime `t`, smallest first; they
/// correspond to the two primes of `Z[i]` above `t`.
pub fn sqrt_minus_one_pair(t: u64) -> Result<(u64, u64)> {
    let s = canonical_sqrt_minus_one(t)?;
    Ok((s, t - s))
}

fn check_good_reduction(curve: &EllipticCurveOverQi, t: u64) -> Result<()> {
    if t < 3 || !is_prime_u64(t) {
        return Err(Error::invalid(format!("{t} is not an odd prime")));
    }
    if discriminant(curve).norm().is_multiple_of(&BigInt::from(t)) {
        return Err(Error::BadReduction { t });
    }
    Ok(())
}

fn count_points(curve: &EllipticCurveOverQi, field: &Residue) -> u64 {
    let n = field.size() as usize;
    let mut square_roots = vec![0u8; n];
    for y in field.elements() {
        let i = field.index(field.mul(y, y));
        square_roots[i] = square_roots[i].saturating_add(1);
    }
    let a2 = field.reduce(&curve.a2);
    let a4 = field.reduce(&curve.a4);
    let mut count = 1u64;
    for x in field.elements() {
        // x^3 + a2 x^2 + a4 x = x (x (x + a2) + a4)
        let rhs = field.mul(x, field.add(field.mul(x, field.add(x, a2)), a4));
        count += u64::from(square_roots[field.index(rhs)]);
    }
    count
}

/// Projective points of the reduction at `t` over the residue field of size
/// `t^degree`: degree 2 for `t = 3 mod 4`, degree 1 for `t = 1 mod 4` at the
/// prime fixed by [`canonical_sqrt_minus_one`].
pub fn point_count(curve: &EllipticCurveOverQi, t: u64, degree: u32) -> Result<u64> {
    check_good_reduction(curve, t)?;
    match (splitting_of(t), degree) {
        (Splitting::Inert, 2) => Ok(count_points(
            curve,
            &Residue {
                t,
                sqrt_minus_one: None,
            },
        )),
        (Splitting::Split, 1) => {
            let s = canonical_sqrt_minus_one(t)?;
            point_count_at_split(curve, t, s)
        }
        (Splitting::Inert, _) => Err(Error::invalid(format!(
            "{t} is inert in Z[i]; its residue field has {t}^2 elements, so degree must be 2"
        ))),
        _ => Err(Error::invalid(format!(
            "{t} splits in Z[i]; point counts use degree 1"
        ))),
    }
}

/// Point count at the prime above the split prime `t` on which `i = s`.
pub fn point_count_at_split(curve: &EllipticCurveOverQi, t: u64, s: u64) -> Result<u64> {
    check_good_reduction(curve, t)?;
    if s >= t || s * s % t != t - 1 {
        return Err(Error::invalid(format!("{s}^2 != -1 mod {t}")));
    }
    Ok(count_points(
        curve,
        &Residue {
            t,
            sqrt_minus_one: Some(s),
        },
    ))
}

/// Frobenius datum at `t` for the canonical prime above it.
pub fn frobenius(curve: &EllipticCurveOverQi, t: u64) -> Result<FrobeniusDatum> {
    let splitting = splitting_of(t);
    let degree = if splitting == Splitting::Inert { 2 } else { 1 };
    let count = point_count(curve, t, degree)?;
    let field_size = t.pow(degree);
    Ok(FrobeniusDatum {
        t,
        splitting,
        field_size,
        point_count: count,
        trace: field_size as i64 + 1 - count as i64,
    })
}

/// The integer `c >= 0` with `2c^2 = a_{t^2}(E) + 2t` at an inert prime `t`.
/// The newform attached to `E` then has `a_t = +-c sqrt 2`.
pub fn inert_trace_scalar(curve: &EllipticCurveOverQi, t: u64) -> Result<u64> {
    if t % 4 != 3 {
        return Err(Error::invalid(format!("{t} is not 3 mod 4")));
    }
    let datum = frobenius(curve, t)?;
    let shifted = datum.trace + 2 * t as i64;
    let violation = |detail: String| Error::CalibrationViolation { t, detail };
    if shifted < 0 || shifted % 2 != 0 {
        return Err(violation(format!(
            "a_{{t^2}} + 2t = {shifted} is not twice a square"
        )));
    }
    let half = (shifted / 2) as u64;
    let c = half.sqrt();
    if c * c != half {
        return Err(violation(format!(
            "a_{{t^2}} + 2t = {shifted} is not twice a square"
        )));
    }
    Ok(c)
}

/// Trace of Frobenius of `y^2 = x^3 - x` at an odd prime `t`, over `F_t`.
/// An independent count using Euler's criterion, for calibration.
pub fn congruent_number_curve_trace(t: u64) -> i64 {
    let mut sum = 0i64;
    for x in 0..t {
        let rhs = (x * x % t * x % t + t - x) % t;
        if rhs != 0 {
            sum += if pow_mod(rhs, (t - 1) / 2, t) == 1 {
                1
            } else {
                -1
            };
        }
    }
    -sum
}

/// Odd rational primes below the Gaussian primes of bad reduction.
pub fn odd_bad_primes(curve: &EllipticCurveOverQi) -> Result<Vec<BigInt>> {
    let norm = discriminant(curve).norm();
    let divisors = crate::kernel::prime_divisors(&norm)?;
    Ok(divisors
        .primes
        .into_iter()
        .map(BigInt::from)
        .filter(|p| !p.is_even() && p.is_positive())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves() {
        let e = build_curve(0, 1).unwrap();
        assert_eq!(e.a2, GaussianInteger::zero());
        assert_eq!(e.a4, GaussianInteger::from_int(-1));
        assert_eq!(e.to_string(), "y^2 = x^3 + (-1)x");
        let e = build_curve(2, 1).unwrap();
        assert_eq!(
            (e.a2, e.a4),
            (GaussianInteger::new(4, 4), GaussianInteger::new(-1, 4))
        );
        let e = build_curve(2, 3).unwrap();
        assert_eq!(
            (e.a2, e.a4),
            (GaussianInteger::new(4, 4), GaussianInteger::new(-9, 4))
        );
        assert!(build_curve(1, 2).is_err());
        assert!(build_curve(2, 4).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(
            discriminant(&build_curve(0, 1).unwrap()),
            GaussianInteger::from_int(64)
        );
        for (a, b) in [(2, 1), (2, 3), (-4, 7)] {
            assert_eq!(
                discriminant(&build_curve(a, b).unwrap()),
                discriminant_factored(a, b)
            );
        }
        let minus = GaussianInteger::new(-1, 4);
        let plus = GaussianInteger::new(1, 4);
        assert_eq!((&minus * &plus), GaussianInteger::from_int(-17));
    }

    #[test]
    fn counts_on_y2_x3_minus_x() {
        let e = build_curve(0, 1).unwrap();
        assert_eq!(point_count(&e, 3, 2).unwrap(), 16);
        assert_eq!(point_count(&e, 7, 2).unwrap(), 64);
        assert_eq!(point_count(&e, 5, 1).unwrap(), 8);
        assert!(point_count(&e, 3, 1).is_err());
        assert!(point_count(&e, 5, 2).is_err());
        assert!(matches!(point_count(&e, 2, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn bad_reduction() {
        let e = build_curve(2, 1).unwrap();
        assert!(matches!(
            point_count(&e, 17, 1),
            Err(Error::BadReduction { t: 17 })
        ));
    }

    #[test]
    fn inert_scalars() {
        let e = build_curve(0, 1).unwrap();
        assert_eq!(inert_trace_scalar(&e, 3).unwrap(), 0);
        assert_eq!(inert_trace_scalar(&e, 7).unwrap(), 0);
        let e = build_curve(2, 1).unwrap();
        let c = inert_trace_scalar(&e, 3).unwrap();
        let a9 = frobenius(&e, 3).unwrap().trace;
        assert_eq!(2 * (c * c) as i64, a9 + 6);
    }

    #[test]
    fn split_primes_agree_with_independent_count() {
        let e = build_curve(0, 1).unwrap();
        for t in [5u64, 13, 17, 29, 37, 41] {
            let (s, s2) = sqrt_minus_one_pair(t).unwrap();
            let expect = t as i64 + 1 - congruent_number_curve_trace(t);
            assert_eq!(point_count_at_split(&e, t, s).unwrap() as i64, expect);
            assert_eq!(point_count_at_split(&e, t, s2).unwrap() as i64, expect);
        }
    }

    #[test]
    fn bad_primes_divide_a4_plus_b4() {
        let e = build_curve(2, 3).unwrap();
        assert_eq!(odd_bad_primes(&e).unwrap(), vec![BigInt::from(97)]);
    }
}
