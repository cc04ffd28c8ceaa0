//! Weight-2 newforms with exact Hecke eigenvalues: records, the on-disk
//! cache, the bundled snapshot and the remote client.

mod bundled;
mod cache;
pub mod lmfdb;
mod store;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::factor::primes_up_to;
use crate::kernel::sturm::roots_within_hasse_interval;
use crate::kernel::{IntPolynomial, NumberField, NumberFieldElement};

pub use bundled::{bundled_levels, bundled_snapshot};
pub use cache::{cache_path, decode_level, encode_level, load_cached, store_cached, LevelDocument};
pub use store::{NewformStore, StoreConfig, DEFAULT_MIN_AN, DEFAULT_SOURCE_URL};

/// Hasse-interval validation runs over primes below this bound.
pub const HASSE_CHECK_LIMIT: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Bundled,
    Remote,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Bundled => write!(f, "bundled"),
            Source::Remote => write!(f, "remote"),
        }
    }
}

/// A newform of weight 2 and trivial character, with `a_1, ..., a_{num_an}`
/// as elements of its Hecke field `Q[y]/(field_poly)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformRecord {
    pub level: u64,
    pub label: String,
    pub dimension: usize,
    pub field: Arc<NumberField>,
    pub an: Vec<NumberFieldElement>,
    pub cm_discriminant: Option<i64>,
    pub source: Source,
}

impl NewformRecord {
    pub fn field_poly(&self) -> &IntPolynomial {
        self.field.poly()
    }

    pub fn num_an(&self) -> usize {
        self.an.len()
    }

    /// `a_n`, 1-based.
    pub fn a(&self, n: usize) -> Result<&NumberFieldElement> {
        if n == 0 || n > self.an.len() {
            return Err(Error::MissingCoefficient {
                label: self.label.clone(),
                n,
                available: self.an.len(),
            });
        }
        Ok(&self.an[n - 1])
    }

    fn violation(&self, invariant: impl Into<String>) -> Error {
        Error::InvariantViolation {
            label: self.label.clone(),
            invariant: invariant.into(),
        }
    }

    /// Checks `a_1 = 1`, the field degree, multiplicativity at 6 and 10, and
    /// the Hasse interval for `a_t` at primes `t < HASSE_CHECK_LIMIT`.
    pub fn validate(&self) -> Result<()> {
        if self.field.degree() != self.dimension {
            return Err(self.violation(format!(
                "dimension {} = deg(field_poly) {}",
                self.dimension,
                self.field.degree()
            )));
        }
        if self.an.iter().any(|a| a.coords().len() != self.dimension) {
            return Err(self.violation("every a_n has dimension coordinates"));
        }
        let one = NumberFieldElement::from_int(self.field.clone(), 1);
        match self.an.first() {
            Some(a1) if *a1 == one => {}
            _ => return Err(self.violation("a_1 = 1")),
        }
        for (n, d, e) in [(6, 2, 3), (10, 2, 5)] {
            if self.an.len() >= n {
                let product = &self.an[d - 1] * &self.an[e - 1];
                if product != self.an[n - 1] {
                    return Err(self.violation(format!("a_{n} = a_{d} a_{e}")));
                }
            }
        }
        for t in primes_up_to(HASSE_CHECK_LIMIT.min(self.an.len() as u64)) {
            let cp = self.an[t as usize - 1].char_poly();
            if !roots_within_hasse_interval(&cp, t) {
                return Err(self.violation(format!("a_{t} lies in [-2 sqrt {t}, 2 sqrt {t}]")));
            }
        }
        Ok(())
    }

    /// Whether every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.dimension == 1
    }

    /// Build a record from rational integer coefficients `a_1, a_2, ...`.
    pub fn from_integers(level: u64, label: &str, an: &[i64]) -> Result<Self> {
        let field = NumberField::new(IntPolynomial::x())?;
        let an = an
            .iter()
            .map(|&a| NumberFieldElement::from_int(field.clone(), a))
            .collect();
        Ok(NewformRecord {
            level,
            label: label.to_string(),
            dimension: 1,
            field,
            an,
            cm_discriminant: None,
            source: Source::Remote,
        })
    }
}

/// Characteristic polynomial of `a_n` over `Q`, monic of degree
/// `dimension`.
pub fn eigenvalue_char_poly(form: &NewformRecord, n: usize) -> Result<IntPolynomial> {
    Ok(form.a(n)?.char_poly())
}

/// Coefficients `a_1..a_len` from prime-indexed values by the Hecke
/// recursion `a_{p^k} = a_p a_{p^{k-1}} - p a_{p^{k-2}}` (or `a_p^k` when
/// `p | level`), extended multiplicatively.
pub fn coefficients_from_primes(
    field: &Arc<NumberField>,
    level: u64,
    ap: &dyn Fn(u64) -> Option<NumberFieldElement>,
    len: usize,
) -> Option<Vec<NumberFieldElement>> {
    let one = NumberFieldElement::from_int(field.clone(), 1);
    let mut an: Vec<Option<NumberFieldElement>> = vec![None; len + 1];
    if len >= 1 {
        an[1] = Some(one.clone());
    }
    for p in primes_up_to(len as u64) {
        let a_p = ap(p)?;
        let p_elt = NumberFieldElement::from_rational(
            field.clone(),
            BigRational::from_integer(BigInt::from(p)),
        );
        let (mut prev, mut cur) = (one.clone(), a_p.clone());
        let mut pk = p as usize;
        while pk <= len {
            an[pk] = Some(cur.clone());
            let next = if level % p == 0 {
                &cur * &a_p
            } else {
                &(&cur * &a_p) - &(&p_elt * &prev)
            };
            prev = cur;
            cur = next;
            pk *= p as usize;
        }
    }
    for n in 2..=len {
        if an[n].is_some() {
            continue;
        }
        let p = smallest_prime_factor(n);
        let mut pk = p;
        while (n / pk) % p == 0 {
            pk *= p;
        }
        let value = an[pk].as_ref()? * an[n / pk].as_ref()?;
        an[n] = Some(value);
    }
    an.into_iter().skip(1).collect()
}

fn smallest_prime_factor(n: usize) -> usize {
    (2..)
        .take_while(|d| d * d <= n)
        .find(|d| n % d == 0)
        .unwrap_or(n)
}

pub(crate) fn rational(num: BigInt, den: BigInt) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::Parse {
            field: "an".into(),
            detail: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(num, den))
}
