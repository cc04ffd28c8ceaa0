//! Arithmetic in the Gaussian integers `Z[i]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInteger {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n, 0)
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn conj(&self) -> Self {
        GaussianInteger {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self / d` if `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &d.conj();
        let (re, r1) = num.re.div_rem(&n);
        let (im, r2) = num.im.div_rem(&n);
        (r1.is_zero() && r2.is_zero()).then_some(GaussianInteger { re, im })
    }

    pub fn divides(&self, z: &Self) -> bool {
        z.div_exact(self).is_some()
    }

    /// Euclidean division with the quotient rounded to the nearest lattice
    /// point, so that `norm(remainder) <= norm(d) / 2`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let n = d.norm();
        let num = self * &d.conj();
        let q = GaussianInteger {
            re: round_div(&num.re, &n),
            im: round_div(&num.im, &n),
        };
        let r = self - &(&q * d);
        (q, r)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Whether `self` is a Gaussian prime: its norm is a rational prime, or
    /// it is a unit times a rational prime congruent to 3 mod 4.
    pub fn is_prime(&self) -> bool {
        let n = self.norm();
        if let Some(nu) = n.to_biguint() {
            if is_prime(&nu) {
                return true;
            }
        }
        let p = if self.re.is_zero() {
            self.im.abs()
        } else if self.im.is_zero() {
            self.re.abs()
        } else {
            return false;
        };
        p.to_biguint().is_some_and(|pu| is_prime(&pu)) && (&p % 4u32) == BigInt::from(3)
    }
}

fn round_div(a: &BigInt, n: &BigInt) -> BigInt {
    // floor((2a + n) / 2n) for n > 0
    let two = BigInt::from(2);
    (a * &two + n).div_floor(&(n * &two))
}

/// Exponent of the Gaussian prime `pi` in `z`.
pub fn gaussian_valuation(z: &GaussianInteger, pi: &GaussianInteger) -> Result<u32> {
    if z.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    if !pi.is_prime() {
        return Err(Error::invalid(format!("{pi} is not a Gaussian prime")));
    }
    let mut v = 0;
    let mut cur = z.clone();
    while let Some(q) = cur.div_exact(pi) {
        cur = q;
        v += 1;
    }
    Ok(v)
}

/// A Gaussian prime of norm `q` for a rational prime `q` that is 2 or
/// congruent to 1 mod 4. The returned prime has positive real part and
/// positive imaginary part; its conjugate is the other prime above `q`.
pub fn prime_above(q: u64) -> Result<GaussianInteger> {
    if !is_prime(&BigUint::from(q)) || (q != 2 && q % 4 != 1) {
        return Err(Error::invalid(format!(
            "{q} does not split or ramify in Z[i]"
        )));
    }
    if q == 2 {
        return Ok(GaussianInteger::new(1, 1));
    }
    // x^2 = -1 mod q from a quadratic non-residue
    let s = (2..q)
        .map(|a| super::factor::pow_mod(a, (q - 1) / 4, q))
        .find(|&s| (s as u128 * s as u128) % q as u128 == (q - 1) as u128)
        .expect("q = 1 mod 4 has a square root of -1");
    let g = GaussianInteger::from_int(q).gcd(&GaussianInteger::new(s, 1));
    Ok(normalize_first_quadrant(&g))
}

/// The associate of `z` with `re > 0` and `im >= 0`.
pub fn normalize_first_quadrant(z: &GaussianInteger) -> GaussianInteger {
    let mut w = z.clone();
    for _ in 0..4 {
        if w.re.is_positive() && !w.im.is_negative() {
            return w;
        }
        w = &w * &GaussianInteger::i();
    }
    w
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => {
                write!(f, "{}-{}i", self.re, self.im.abs())
            }
            _ => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl Add for &GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Mul<&GaussianInteger> for BigInt {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        GaussianInteger {
            re: &self * &rhs.re,
            im: &self * &rhs.im,
        }
    }
}
