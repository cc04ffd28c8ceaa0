//! Primality testing and integer factorization.
//!
//! Trial division up to [`TRIAL_BOUND`], then Pollard's rho with Brent's
//! cycle detection. Rho effort is capped; whatever cannot be split within
//! the cap is returned as an unfactored cofactor.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const TRIAL_BOUND: u64 = 1_000_000;

/// Rho iterations allowed per polynomial constant before giving up on it.
const RHO_ITERATION_CAP: u64 = 1 << 22;
const RHO_CONSTANTS: [u64; 6] = [1, 3, 5, 7, 11, 13];

/// Miller–Rabin bases; deterministic for every n < 3.3 * 10^24.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with fixed bases. Exact below 3.3 * 10^24, probabilistic
/// above that.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Result of factoring a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    /// Prime factors with multiplicity.
    pub primes: BTreeMap<BigUint, u32>,
    /// Composite part that could not be split within the effort cap.
    pub cofactor: Option<BigUint>,
}

impl Factorization {
    /// Product of all prime powers and the cofactor.
    pub fn value(&self) -> BigUint {
        let mut acc = self
            .primes
            .iter()
            .fold(BigUint::one(), |acc, (p, &e)| acc * p.pow(e));
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }
}

/// Distinct prime divisors of a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrimeDivisors {
    pub primes: BTreeSet<BigUint>,
    /// Composite cofactor with unknown prime divisors, if factoring stalled.
    pub unknown_cofactor: Option<BigUint>,
}

pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let mut m = n.magnitude().clone();
    let mut out = Factorization::default();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.primes.insert(pb, e);
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    let mut pending = vec![m];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.primes.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(root) = perfect_power_root(&m) {
            let (base, k) = root;
            for _ in 0..k {
                pending.push(base.clone());
            }
            continue;
        }
        match pollard_brent(&m) {
            Some(d) => {
                let other = &m / &d;
                pending.push(d);
                pending.push(other);
            }
            None => {
                let c = out.cofactor.take().unwrap_or_else(BigUint::one);
                out.cofactor = Some(c * m);
            }
        }
    }
    Ok(out)
}

/// Distinct prime divisors of `n`. Errors on zero.
pub fn prime_divisors(n: &BigInt) -> Result<PrimeDivisors> {
    let f = factorize(n)?;
    Ok(PrimeDivisors {
        primes: f.primes.into_keys().collect(),
        unknown_cofactor: f.cofactor,
    })
}

/// `m = base^k` with `k >= 2` maximal-ish, if `m` is a perfect power.
fn perfect_power_root(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = m.nth_root(k);
        if r < BigUint::from(2u8) {
            break;
        }
        if r.pow(k) == *m {
            return Some((r, k));
        }
    }
    None
}

/// One nontrivial factor of the odd composite `n`, or `None` if the effort
/// cap is exhausted.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for &c in &RHO_CONSTANTS {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u8);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let batch: u64 = 128;
        let mut iterations = 0u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            iterations += r;
            r *= 2;
            if iterations > RHO_ITERATION_CAP {
                break;
            }
        }
        if g == *n {
            // Batched product overshot; replay one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}
