//! Sets of rational primes that may be infinite.
//!
//! A [`PrimeSet`] is a finite set of primes together with an optional
//! cofinite tail: "every prime `>= from`". The universal set is the tail
//! starting at 2. This is enough to express both the sieve's "every prime
//! survives" outcome and the conservative answer for a resultant whose
//! factorization stalled.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::json::big_number;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrimeSet {
    primes: BTreeSet<BigUint>,
    tail_from: Option<BigUint>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all() -> Self {
        PrimeSet {
            primes: BTreeSet::new(),
            tail_from: Some(BigUint::from(2u8)),
        }
    }

    pub fn from_primes<I: IntoIterator<Item = BigUint>>(it: I) -> Self {
        PrimeSet {
            primes: it.into_iter().collect(),
            tail_from: None,
        }
    }

    pub fn from_u64s<I: IntoIterator<Item = u64>>(it: I) -> Self {
        Self::from_primes(it.into_iter().map(BigUint::from))
    }

    /// Every prime `>= from`.
    pub fn tail(from: BigUint) -> Self {
        PrimeSet {
            primes: BTreeSet::new(),
            tail_from: Some(from),
        }
        .normalized()
    }

    pub fn is_all(&self) -> bool {
        self.tail_from
            .as_ref()
            .is_some_and(|b| *b <= BigUint::from(2u8))
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() && self.tail_from.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.tail_from.is_none()
    }

    /// The explicitly listed primes (those below the tail, if any).
    pub fn primes(&self) -> &BTreeSet<BigUint> {
        &self.primes
    }

    pub fn tail_from(&self) -> Option<&BigUint> {
        self.tail_from.as_ref()
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        self.primes.contains(p) || self.tail_from.as_ref().is_some_and(|b| p >= b)
    }

    pub fn insert(&mut self, p: BigUint) {
        if !self.contains(&p) {
            self.primes.insert(p);
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let tail_from = match (&self.tail_from, &other.tail_from) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        PrimeSet {
            primes: self.primes.union(&other.primes).cloned().collect(),
            tail_from,
        }
        .normalized()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut primes: BTreeSet<BigUint> = self
            .primes
            .iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        primes.extend(other.primes.iter().filter(|p| self.contains(p)).cloned());
        let tail_from = match (&self.tail_from, &other.tail_from) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            _ => None,
        };
        PrimeSet { primes, tail_from }.normalized()
    }

    /// Primes `>= min` only.
    pub fn at_least(&self, min: &BigUint) -> Self {
        PrimeSet {
            primes: self.primes.iter().filter(|p| *p >= min).cloned().collect(),
            tail_from: self.tail_from.as_ref().map(|b| b.max(min).clone()),
        }
        .normalized()
    }

    /// Primes `< bound` only; always finite.
    pub fn below(&self, bound: &BigUint) -> Self {
        let mut primes: BTreeSet<BigUint> =
            self.primes.iter().filter(|p| *p < bound).cloned().collect();
        if let Some(from) = &self.tail_from {
            let start = from.clone();
            let mut n = start;
            while n < *bound {
                if super::factor::is_prime(&n) {
                    primes.insert(n.clone());
                }
                n += 1u8;
            }
        }
        PrimeSet {
            primes,
            tail_from: None,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.primes.iter().all(|p| other.contains(p))
            && match (&self.tail_from, &other.tail_from) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a >= b,
            }
    }

    fn normalized(mut self) -> Self {
        if let Some(from) = &self.tail_from {
            self.primes.retain(|p| p < from);
        }
        self
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return write!(f, "ALL");
        }
        let listed: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}", listed.join(", "))?;
        if let Some(from) = &self.tail_from {
            if !listed.is_empty() {
                write!(f, ", ")?;
            }
            write!(f, "p >= {from}")?;
        }
        write!(f, "}}")
    }
}

/// `"ALL"` for the universal set, a JSON array of integers for finite sets,
/// and `{"primes": [...], "all_from": n}` otherwise.
impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_all() {
            return serializer.serialize_str("ALL");
        }
        let listed: Vec<serde_json::Number> = self.primes.iter().map(big_number).collect();
        match &self.tail_from {
            None => listed.serialize(serializer),
            Some(from) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("primes", &listed)?;
                map.serialize_entry("all_from", &big_number(from))?;
                map.end()
            }
        }
    }
}
