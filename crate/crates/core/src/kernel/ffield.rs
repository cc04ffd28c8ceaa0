//! Finite fields of odd characteristic and polynomials over them.
//!
//! Used to reduce Hecke eigenvalues modulo primes of their coefficient
//! fields: factor the defining polynomial modulo `l` to enumerate the primes
//! above `l`, and embed residue fields into a common extension to compare
//! eigenvalues of two different forms.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::{is_prime_u64, pow_mod, primes_up_to};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Seed for every randomized splitting step, so results are reproducible.
const SPLIT_SEED: u64 = 0x05ee_d0ff_1e1d;

/// Field operations over an element type.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn embed_u64(&self, n: u64) -> Self::Elem;
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    /// Number of elements.
    fn order(&self) -> BigUint;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// The prime field `F_p`, `p` an odd prime below 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 32).contains(&p) || !is_prime_u64(p) {
            return Err(Error::invalid(format!(
                "{p} is not an odd prime below 2^32"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((n % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }

    /// `num / den mod p`, or `None` when `p` divides the denominator.
    pub fn reduce_rational(&self, r: &BigRational) -> Option<u64> {
        let den = self.reduce_int(r.denom());
        let inv = self.inv(&den)?;
        Some(self.mul(&self.reduce_int(r.numer()), &inv))
    }

    pub fn reduce_poly(&self, f: &IntPolynomial) -> Vec<u64> {
        trim(
            self,
            f.coeffs().iter().map(|c| self.reduce_int(c)).collect(),
        )
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a % self.p != 0).then(|| pow_mod(*a, self.p - 2, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.p == 0
    }
    fn embed_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
}

/// `F_p[z] / (m(z))` for a monic irreducible `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    modulus: Vec<u64>,
}

impl ExtensionField {
    /// `modulus` must be monic and irreducible over `base`; irreducibility
    /// is checked.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let modulus = trim(&base, modulus);
        if modulus.len() < 2 || *modulus.last().expect("nonempty") != 1 {
            return Err(Error::invalid(
                "extension modulus must be monic of positive degree",
            ));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(Error::invalid(format!(
                "{} is reducible mod {}",
                PolyDisplay(&modulus),
                base.p
            )));
        }
        Ok(ExtensionField { base, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    /// The class of `z`.
    pub fn generator(&self) -> Vec<u64> {
        let mut g = vec![0; self.degree()];
        if self.degree() == 1 {
            g[0] = self.base.neg(&self.modulus[0]);
        } else {
            g[1] = 1;
        }
        g
    }

    /// Image of a polynomial over `F_p` evaluated at an element.
    pub fn eval_base_poly(&self, f: &[u64], at: &[u64]) -> Vec<u64> {
        f.iter().rev().fold(self.zero(), |acc, c| {
            let mut v = self.mul(&acc, &at.to_vec());
            v[0] = self.base.add(&v[0], c);
            v
        })
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let prod = poly_mul(&self.base, a, b);
        let mut r = poly_rem(&self.base, &prod, &self.modulus);
        r.resize(self.degree(), 0);
        r
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q - 2)
        let e = self.order() - 2u8;
        Some(self.pow(a, &e))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn embed_u64(&self, n: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n % self.base.p;
        v
    }
    fn random(&self, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.base.p).pow(self.degree() as u32)
    }
}

/// Polynomials over a field are coefficient vectors, lowest degree first,
/// with no trailing zeros.
pub fn trim<F: Field>(f: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    while v.last().is_some_and(|c| f.is_zero(c)) {
        v.pop();
    }
    v
}

pub fn poly_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    trim(
        f,
        (0..n)
            .map(|k| f.add(a.get(k).unwrap_or(&z), b.get(k).unwrap_or(&z)))
            .collect(),
    )
}

pub fn poly_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    trim(
        f,
        (0..n)
            .map(|k| f.sub(a.get(k).unwrap_or(&z), b.get(k).unwrap_or(&z)))
            .collect(),
    )
}

pub fn poly_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `d` must be nonzero.
pub fn poly_divrem<F: Field>(f: &F, a: &[F::Elem], d: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let d = trim(f, d.to_vec());
    assert!(!d.is_empty(), "polynomial division by zero");
    let mut r = trim(f, a.to_vec());
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let inv_lc = f.inv(d.last().expect("nonempty")).expect("field element");
    let mut q = vec![f.zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let c = f.mul(r.last().expect("nonempty"), &inv_lc);
        for (k, dk) in d.iter().enumerate() {
            r[shift + k] = f.sub(&r[shift + k], &f.mul(&c, dk));
        }
        q[shift] = c;
        r.pop();
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn poly_rem<F: Field>(f: &F, a: &[F::Elem], d: &[F::Elem]) -> Vec<F::Elem> {
    poly_divrem(f, a, d).1
}

pub fn poly_monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Monic gcd.
pub fn poly_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (mut a, mut b) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(f, &a)
}

/// `base^e mod m`.
pub fn poly_powmod<F: Field>(f: &F, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let base = poly_rem(f, base, m);
    let mut acc = poly_rem(f, &[f.one()], m);
    for i in (0..e.bits()).rev() {
        acc = poly_rem(f, &poly_mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = poly_rem(f, &poly_mul(f, &acc, &base), m);
        }
    }
    acc
}

fn poly_derivative(f: &PrimeField, a: &[u64]) -> Vec<u64> {
    trim(
        f,
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| f.mul(c, &f.embed_u64(k as u64)))
            .collect(),
    )
}

fn x_poly<F: Field>(f: &F) -> Vec<F::Elem> {
    vec![f.zero(), f.one()]
}

/// Rabin's irreducibility test over `F_p`.
pub fn is_irreducible(f: &PrimeField, g: &[u64]) -> bool {
    let g = poly_monic(f, &trim(f, g.to_vec()));
    let Some(n) = g.len().checked_sub(1) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let p = f.order();
    let x = x_poly(f);
    let frob = |k: usize| poly_powmod(f, &x, &p.pow(k as u32), &g);
    if poly_sub(f, &frob(n), &x) != Vec::<u64>::new() {
        return false;
    }
    for r in primes_up_to(n as u64) {
        if n as u64 % r != 0 {
            continue;
        }
        let h = poly_sub(f, &frob(n / r as usize), &x);
        if poly_gcd(f, &h, &g).len() != 1 {
            return false;
        }
    }
    true
}

/// An irreducible factor of a polynomial over `F_p` with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorModP {
    pub factor: Vec<u64>,
    pub multiplicity: u32,
}

impl FactorModP {
    pub fn degree(&self) -> usize {
        self.factor.len() - 1
    }
}

/// Complete factorization of `g` over `F_p` into monic irreducibles, sorted
/// by degree and then coefficients.
pub fn factor_mod_p(f: &PrimeField, g: &[u64]) -> Vec<FactorModP> {
    let g = poly_monic(f, &trim(f, g.to_vec()));
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f, &g) {
        for (part, d) in distinct_degree(f, &sqf) {
            for factor in equal_degree_split(f, &part, d) {
                out.push(FactorModP {
                    factor,
                    multiplicity: mult,
                });
            }
        }
    }
    out.sort_by(|a, b| (a.factor.len(), &a.factor).cmp(&(b.factor.len(), &b.factor)));
    out
}

fn squarefree_decomposition(f: &PrimeField, g: &[u64]) -> Vec<(Vec<u64>, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if g.len() <= 1 {
        return out;
    }
    let dg = poly_derivative(f, g);
    if dg.is_empty() {
        // g(x) = h(x^p); coefficients of F_p are their own p-th roots
        let h: Vec<u64> = g.iter().step_by(p as usize).copied().collect();
        for (fac, m) in squarefree_decomposition(f, &h) {
            out.push((fac, m * p as u32));
        }
        return out;
    }
    let mut c = poly_gcd(f, g, &dg);
    let mut w = poly_divrem(f, g, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = poly_gcd(f, &w, &c);
        let fac = poly_divrem(f, &w, &y).0;
        if fac.len() > 1 {
            out.push((poly_monic(f, &fac), i));
        }
        w = y;
        c = poly_divrem(f, &c, &w).0;
        i += 1;
    }
    if c.len() > 1 {
        let h: Vec<u64> = c.iter().step_by(p as usize).copied().collect();
        for (fac, m) in squarefree_decomposition(f, &h) {
            out.push((fac, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &PrimeField, g: &[u64]) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut rest = g.to_vec();
    let x = x_poly(f);
    let p = f.order();
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 2 * (d + 1) {
        d += 1;
        h = poly_powmod(f, &h, &p, &rest);
        let gg = poly_gcd(f, &poly_sub(f, &h, &x), &rest);
        if gg.len() > 1 {
            rest = poly_divrem(f, &rest, &gg).0;
            h = poly_rem(f, &h, &rest);
            out.push((gg, d));
        }
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((poly_monic(f, &rest), deg));
    }
    out
}

/// Cantor–Zassenhaus: split a squarefree product of monic irreducibles of
/// degree `d` over the field `f` (odd order).
pub fn equal_degree_split<F: Field>(f: &F, g: &[F::Elem], d: usize) -> Vec<Vec<F::Elem>> {
    let g = poly_monic(f, g);
    let n = g.len() - 1;
    if n == d {
        return vec![g];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let e = (f.order().pow(d as u32) - 1u8) / 2u8;
    let mut pending = vec![g];
    let mut done = Vec::new();
    while let Some(h) = pending.pop() {
        if h.len() - 1 == d {
            done.push(h);
            continue;
        }
        loop {
            let a: Vec<F::Elem> = trim(f, (0..h.len() - 1).map(|_| f.random(&mut rng)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = poly_sub(f, &poly_powmod(f, &a, &e, &h), &[f.one()]);
            let s = poly_gcd(f, &b, &h);
            if s.len() > 1 && s.len() < h.len() {
                let t = poly_monic(f, &poly_divrem(f, &h, &s).0);
                pending.push(s);
                pending.push(t);
                break;
            }
        }
    }
    done
}

/// All roots in `f` of a polynomial that splits into distinct linear
/// factors over `f`.
pub fn roots_of_split<F: Field>(f: &F, g: &[F::Elem]) -> Vec<F::Elem> {
    equal_degree_split(f, g, 1)
        .into_iter()
        .map(|lin| f.neg(&lin[0]))
        .collect()
}

/// A monic irreducible polynomial of degree `n` over `F_p`, found by seeded
/// random search.
pub fn irreducible_of_degree(f: &PrimeField, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ n as u64);
    loop {
        let mut g: Vec<u64> = (0..n).map(|_| f.random(&mut rng)).collect();
        g.push(1);
        if is_irreducible(f, &g) {
            return g;
        }
    }
}

/// `Display` adapter for a polynomial over `F_p` in the variable `y`.
pub struct PolyDisplay<'a>(pub &'a [u64]);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "y")?,
                (1, _) => write!(f, "{c}*y")?,
                (_, 1) => write!(f, "y^{k}")?,
                _ => write!(f, "{c}*y^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
