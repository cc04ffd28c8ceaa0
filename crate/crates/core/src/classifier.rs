//! Classification of a prime `q` for the equation `x^4 + y^4 = q z^p`.
//!
//! A prime is dismissed early when there is no local solution
//! (`q != 1 mod 8`), when it is itself a sum of two fourth powers (a trivial
//! solution exists for every `p`), or when it has the shape `(2A)^4 + B^2`
//! (a second Q-curve yields a newform of the same level that the sieve
//! cannot separate). Everything else is "interesting" and goes to the sieve.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::factor::{is_prime_u64, pow_mod, prime_divisors};

/// `has_local_solution` cross-checks the congruence criterion against the
/// exhaustive search for every `q` up to this bound.
pub const LOCAL_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NotOneMod8,
    BiquadrateSum { a: u64, b: u64 },
    A4B2Form { a: u64, b: u64 },
    Interesting,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotOneMod8 => write!(f, "NotOneMod8"),
            Verdict::BiquadrateSum { a, b } => write!(f, "BiquadrateSum({a},{b})"),
            Verdict::A4B2Form { a, b } => write!(f, "A4B2Form({a},{b})"),
            Verdict::Interesting => write!(f, "Interesting"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub q: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Classification {
    pub fn is_interesting(&self) -> bool {
        self.verdict == Verdict::Interesting
    }

    /// Why the sieve cannot be applied, for non-interesting primes.
    pub fn obstruction(&self) -> Option<String> {
        let q = self.q;
        match self.verdict {
            Verdict::NotOneMod8 => Some(format!(
                "u^4 = -1 has no solution mod {q}, so there are no primitive solutions for any p"
            )),
            Verdict::BiquadrateSum { a, b } => Some(format!(
                "{q} = {a}^4 + {b}^4 gives the trivial solution ({a}, {b}, 1); its Q-curve has a \
                 level-{} newform with coefficients in Q(sqrt 2) and an inner twist, so the \
                 congruences cannot be contradicted",
                32 * q
            )),
            Verdict::A4B2Form { a, b } => Some(format!(
                "{q} = (2*{a})^4 + {b}^2; the Q-curve attached to ({}, {b}, 1) has a level-{} \
                 newform with coefficients in Q(sqrt 2) and an inner twist, so the congruences \
                 cannot be contradicted",
                2 * a,
                32 * q
            )),
            Verdict::Interesting => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)
    }
}

fn require_odd_prime(q: u64) -> Result<()> {
    if q % 2 == 0 || !is_prime_u64(q) {
        return Err(Error::invalid(format!("{q} is not an odd prime")));
    }
    Ok(())
}

/// `q = 1 (mod 8)`.
pub fn local_solution_by_congruence(q: u64) -> Result<bool> {
    require_odd_prime(q)?;
    Ok(q % 8 == 1)
}

/// Exhaustive search for `u` in `[1, q - 1]` with `u^4 = -1 (mod q)`.
pub fn local_solution_by_search(q: u64) -> Result<bool> {
    require_odd_prime(q)?;
    Ok((1..q).any(|u| pow_mod(u, 4, q) == q - 1))
}

/// Whether `u^4 = -1 (mod q)` is solvable. Both routes are evaluated for
/// `q <= LOCAL_SEARCH_LIMIT` and must agree.
pub fn has_local_solution(q: u64) -> Result<bool> {
    let by_congruence = local_solution_by_congruence(q)?;
    if q <= LOCAL_SEARCH_LIMIT {
        let by_search = local_solution_by_search(q)?;
        if by_search != by_congruence {
            return Err(Error::OracleDisagreement(format!(
                "q = {q}: congruence test says {by_congruence}, exhaustive search says {by_search}"
            )));
        }
    }
    Ok(by_congruence)
}

fn fourth_root_exact(n: u64) -> Option<u64> {
    let r = n.nth_root(4);
    (r.pow(4) == n).then_some(r)
}

/// `(a, b)` with `0 < a <= b` and `a^4 + b^4 = q`.
pub fn biquadrate_sum(q: u64) -> Option<(u64, u64)> {
    let mut a = 1u64;
    while 2 * a.pow(4) <= q {
        if let Some(b) = fourth_root_exact(q - a.pow(4)) {
            if b >= a {
                return Some((a, b));
            }
        }
        a += 1;
    }
    None
}

/// `(A, B)` with `A, B >= 1` and `(2A)^4 + B^2 = q`.
pub fn even_fourth_plus_square(q: u64) -> Option<(u64, u64)> {
    let mut a = 1u64;
    while 16 * a.pow(4) < q {
        let rest = q - 16 * a.pow(4);
        let b = rest.sqrt();
        if b >= 1 && b * b == rest {
            return Some((a, b));
        }
        a += 1;
    }
    None
}

/// Classify a prime `q`. Checks run in the order NotOneMod8, BiquadrateSum,
/// A4B2Form; the first that applies wins.
pub fn classify(q: u64) -> Result<Classification> {
    if q < 2 || !is_prime_u64(q) {
        return Err(Error::invalid(format!("{q} is not prime")));
    }
    let verdict = if q == 2 {
        Verdict::BiquadrateSum { a: 1, b: 1 }
    } else if !has_local_solution(q)? {
        Verdict::NotOneMod8
    } else if let Some((a, b)) = biquadrate_sum(q) {
        Verdict::BiquadrateSum { a, b }
    } else if let Some((a, b)) = even_fourth_plus_square(q) {
        Verdict::A4B2Form { a, b }
    } else {
        Verdict::Interesting
    };
    Ok(Classification { q, verdict })
}

/// Whether every odd prime divisor of `a^4 + b^4` is `1 mod 8`.
pub fn check_divisor_residue(a: i64, b: i64) -> Result<bool> {
    if a.gcd(&b) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {b}) != 1")));
    }
    let n = BigInt::from(a).pow(4) + BigInt::from(b).pow(4);
    if n <= BigInt::from(1) {
        return Err(Error::invalid("a^4 + b^4 must exceed 1"));
    }
    let divisors = prime_divisors(&n)?;
    let eight = BigUint::from(8u8);
    Ok(divisors
        .primes
        .iter()
        .filter(|p| p.is_odd())
        .all(|p| p % &eight == BigUint::from(1u8)))
}

/// All `(x, y, z)` with `0 < x, y <= bound`, `gcd(x, y) = 1`, `z >= 1` and
/// `x^4 + y^4 = q z^p`, sorted lexicographically.
pub fn search_solutions(q: u64, p: u32, bound: u64) -> Vec<(u64, u64, BigUint)> {
    if q == 0 || p == 0 {
        return Vec::new();
    }
    let qb = BigUint::from(q);
    let mut found: Vec<(u64, u64, BigUint)> = (1..=bound)
        .into_par_iter()
        .flat_map_iter(|x| {
            let qb = qb.clone();
            (1..=bound).filter_map(move |y| {
                if x.gcd(&y) != 1 {
                    return None;
                }
                let n = BigUint::from(x).pow(4) + BigUint::from(y).pow(4);
                let (m, r) = n.div_rem(&qb);
                if !r.is_zero() {
                    return None;
                }
                let z = m.nth_root(p);
                (z.pow(p) == m && z.to_u64() != Some(0)).then_some((x, y, z))
            })
        })
        .collect();
    found.sort();
    found
}
