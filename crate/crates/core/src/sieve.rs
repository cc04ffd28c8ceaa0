//! Elimination of exponents `p` by comparing Hecke eigenvalues at primes
//! `t = 3 (mod 4)`.
//!
//! At such `t` the form attached to a putative solution has
//! `a_t = c sqrt 2` with `2c^2 <= 4t`. If it is congruent mod a prime above
//! `p` to a newform `f` of level `32q`, then `p` divides the resultant of
//! `x^2 - 2c^2` and the characteristic polynomial of `b_t = a_t(f)` for one
//! of the allowed `c`, or `p = t`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::classifier::classify;
use crate::error::{Error, Result};
use crate::json::big_number;
use crate::kernel::factor::{is_prime_u64, TRIAL_BOUND};
use crate::kernel::{prime_divisors, resultant, IntPolynomial, PrimeSet};
use crate::newform::{eigenvalue_char_poly, NewformRecord, NewformStore};

pub const DEFAULT_TSET: [u64; 4] = [3, 7, 11, 19];
pub const DEFAULT_P_MIN: u64 = 14;

/// The hypotheses the elimination relies on; printed in every report.
pub const ASSUMPTIONS: [&str; 5] = [
    "Modularity: the Q-curve E_(A,B) over Q(i) attached to a primitive solution is modular, so its restriction of scalars corresponds to a weight-2 newform with an inner twist.",
    "Level lowering: for p > 13 the mod-p representation arises from a weight-2 newform of level 32q with trivial character.",
    "Irreducibility: the mod-p representation is irreducible for every p > 13.",
    "Conductor: the 2-part of the conductor of the family E_(A,B) is 32.",
    "Trace shape: at t = 3 mod 4 the attached form has a_t = c sqrt 2 with c an integer and |a_t| <= 2 sqrt t.",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceCandidates {
    pub t: u64,
    pub scalars: Vec<i64>,
}

/// Values `c` with `a_t = c sqrt 2` allowed by the Hasse bound at
/// `t = 3 (mod 4)`: `|c| <= floor(sqrt(2t))`.
pub fn allowed_trace_scalars(t: u64) -> Result<TraceCandidates> {
    if t % 4 != 3 || !is_prime_u64(t) {
        return Err(Error::invalid(format!("{t} is not a prime = 3 mod 4")));
    }
    let m = (2 * t).sqrt() as i64;
    Ok(TraceCandidates {
        t,
        scalars: (-m..=m).collect(),
    })
}

/// `x^2 - 2c^2`, or `x` for `c = 0`.
pub fn trace_polynomial(c: i64) -> IntPolynomial {
    if c == 0 {
        IntPolynomial::x()
    } else {
        IntPolynomial::from_i64s(&[-2 * c * c, 0, 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultantAudit {
    pub t: u64,
    pub c: u64,
    pub resultant: BigInt,
    pub primes: Vec<BigUint>,
    /// Composite part left unfactored; its primes exceed the trial bound.
    pub unfactored: Option<BigUint>,
}

impl Serialize for ResultantAudit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("t", &self.t)?;
        m.serialize_entry("c", &self.c)?;
        m.serialize_entry("resultant", &big_number(&self.resultant))?;
        let primes: Vec<_> = self.primes.iter().map(big_number).collect();
        m.serialize_entry("primes", &primes)?;
        m.serialize_entry("unfactored", &self.unfactored.as_ref().map(big_number))?;
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurvivorsAt {
    pub primes: PrimeSet,
    pub audit: Vec<ResultantAudit>,
}

fn check_sieve_prime(form: &NewformRecord, t: u64) -> Result<()> {
    if t % 4 != 3 || !is_prime_u64(t) {
        return Err(Error::invalid(format!(
            "sieve prime {t} is not a prime = 3 mod 4"
        )));
    }
    if (2 * form.level) % t == 0 {
        return Err(Error::invalid(format!(
            "sieve prime {t} divides 2 * level {}",
            form.level
        )));
    }
    Ok(())
}

/// Exponents not excluded by the eigenvalue of `form` at `t`, with the
/// resultants that produced them. `c` and `-c` give the same polynomial, so
/// the audit lists `c >= 0`.
pub fn survivors_at(form: &NewformRecord, t: u64) -> Result<SurvivorsAt> {
    check_sieve_prime(form, t)?;
    let bt = eigenvalue_char_poly(form, t as usize)?;
    let candidates = allowed_trace_scalars(t)?;
    let mut primes = PrimeSet::from_u64s([t]);
    let mut audit = Vec::new();
    for c in candidates.scalars.iter().filter(|&&c| c >= 0) {
        let r = resultant(&trace_polynomial(*c), &bt)?;
        let mut entry = ResultantAudit {
            t,
            c: *c as u64,
            resultant: r.clone(),
            primes: Vec::new(),
            unfactored: None,
        };
        if r == BigInt::from(0) {
            primes = PrimeSet::all();
        } else {
            let d = prime_divisors(&r)?;
            entry.primes = d.primes.iter().cloned().collect();
            entry.unfactored = d.unknown_cofactor.clone();
            primes = primes.union(&PrimeSet::from_primes(d.primes));
            if d.unknown_cofactor.is_some() {
                primes = primes.union(&PrimeSet::tail(BigUint::from(TRIAL_BOUND)));
            }
        }
        audit.push(entry);
    }
    Ok(SurvivorsAt { primes, audit })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationReport {
    pub label: String,
    pub per_t: BTreeMap<u64, PrimeSet>,
    /// Intersection over `t`, restricted to `p >= p_min`.
    pub survivors: PrimeSet,
    /// Primes in the intersection below `p_min`, outside the method's
    /// hypotheses.
    pub below_p_min: PrimeSet,
    pub resultants: Vec<ResultantAudit>,
}

impl EliminationReport {
    pub fn is_resolved(&self) -> bool {
        self.survivors.is_finite()
    }
}

impl Serialize for EliminationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("label", &self.label)?;
        m.serialize_entry("per_t", &PerT(&self.per_t))?;
        m.serialize_entry("survivors", &self.survivors)?;
        m.serialize_entry("resultant_audit", &self.resultants)?;
        m.end()
    }
}

/// `per_t` with string keys in numeric order of `t`.
struct PerT<'a>(&'a BTreeMap<u64, PrimeSet>);

impl Serialize for PerT<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (t, set) in self.0 {
            m.serialize_entry(&t.to_string(), set)?;
        }
        m.end()
    }
}

fn normalize_tset(tset: &[u64]) -> Result<Vec<u64>> {
    if tset.is_empty() {
        return Err(Error::invalid("tset is empty"));
    }
    let mut v = tset.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Intersect the survivors over `tset` and split off primes below `p_min`.
pub fn sieve_form(form: &NewformRecord, tset: &[u64], p_min: u64) -> Result<EliminationReport> {
    let tset = normalize_tset(tset)?;
    let mut per_t = BTreeMap::new();
    let mut resultants = Vec::new();
    let mut all = PrimeSet::all();
    for &t in &tset {
        let s = survivors_at(form, t)?;
        all = all.intersection(&s.primes);
        per_t.insert(t, s.primes);
        resultants.extend(s.audit);
    }
    let min = BigUint::from(p_min);
    Ok(EliminationReport {
        label: form.label.clone(),
        per_t,
        survivors: all.at_least(&min),
        below_p_min: all.below(&min),
        resultants,
    })
}

/// One surviving `(form, p)` pair, or a form whose survivors include every
/// prime from some point on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalSurvivor {
    pub label: String,
    pub p: SurvivorPrime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurvivorPrime {
    Prime(BigUint),
    /// Every prime `>= n`; `"ALL"` when `n <= p_min`.
    AllFrom(BigUint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveOutcome {
    pub q: u64,
    pub tset: Vec<u64>,
    pub p_min: u64,
    pub reports: Vec<EliminationReport>,
    pub global_survivors: Vec<GlobalSurvivor>,
    pub proved: bool,
    pub assumptions: Vec<String>,
}

impl SieveOutcome {
    /// Finite surviving primes for `label`.
    pub fn survivors_of(&self, label: &str) -> Vec<u64> {
        self.global_survivors
            .iter()
            .filter(|g| g.label == label)
            .filter_map(|g| match &g.p {
                SurvivorPrime::Prime(p) => p.try_into().ok(),
                SurvivorPrime::AllFrom(_) => None,
            })
            .collect()
    }

    pub fn report(&self, label: &str) -> Option<&EliminationReport> {
        self.reports.iter().find(|r| r.label == label)
    }
}

struct SurvivorJson<'a>(&'a GlobalSurvivor, u64);

impl Serialize for SurvivorJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("label", &self.0.label)?;
        match &self.0.p {
            SurvivorPrime::Prime(p) => m.serialize_entry("p", &big_number(p))?,
            SurvivorPrime::AllFrom(n) if *n <= BigUint::from(self.1) => {
                m.serialize_entry("p", "ALL")?
            }
            SurvivorPrime::AllFrom(n) => {
                let mut inner = BTreeMap::new();
                inner.insert("all_from", big_number(n));
                m.serialize_entry("p", &inner)?
            }
        }
        m.end()
    }
}

impl Serialize for SieveOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let survivors: Vec<_> = self
            .global_survivors
            .iter()
            .map(|g| SurvivorJson(g, self.p_min))
            .collect();
        let mut m = s.serialize_map(Some(7))?;
        m.serialize_entry("q", &self.q)?;
        m.serialize_entry("tset", &self.tset)?;
        m.serialize_entry("p_min", &self.p_min)?;
        m.serialize_entry("forms", &self.reports)?;
        m.serialize_entry("global_survivors", &survivors)?;
        m.serialize_entry("proved", &self.proved)?;
        m.serialize_entry("assumptions", &self.assumptions)?;
        m.end()
    }
}

/// Sieve a list of forms of level `32q` and aggregate.
pub fn sieve_forms(
    q: u64,
    forms: &[NewformRecord],
    tset: &[u64],
    p_min: u64,
) -> Result<SieveOutcome> {
    let tset = normalize_tset(tset)?;
    for &t in &tset {
        if t % 4 != 3 || !is_prime_u64(t) || t == q {
            return Err(Error::invalid(format!(
                "sieve prime {t} must be a prime = 3 mod 4 coprime to 2q"
            )));
        }
    }
    let mut reports = forms
        .par_iter()
        .map(|f| sieve_form(f, &tset, p_min))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.label.cmp(&b.label));
    let mut global_survivors = Vec::new();
    for r in &reports {
        for p in r.survivors.primes() {
            global_survivors.push(GlobalSurvivor {
                label: r.label.clone(),
                p: SurvivorPrime::Prime(p.clone()),
            });
        }
        if let Some(from) = r.survivors.tail_from() {
            global_survivors.push(GlobalSurvivor {
                label: r.label.clone(),
                p: SurvivorPrime::AllFrom(from.clone()),
            });
        }
    }
    let proved = global_survivors.is_empty();
    Ok(SieveOutcome {
        q,
        tset,
        p_min,
        reports,
        global_survivors,
        proved,
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

/// Run the sieve on every newform of level `32q`.
pub fn sieve_level(q: u64, tset: &[u64], p_min: u64, store: &NewformStore) -> Result<SieveOutcome> {
    let class = classify(q)?;
    if let Some(reason) = class.obstruction() {
        return Err(Error::MethodInapplicable { q, reason });
    }
    let forms = store.fetch_level(32 * q)?;
    let mut outcome = sieve_forms(q, &forms, tset, p_min)?;
    if let Some(n) = store.count_nontrivial_character_forms(32 * q)? {
        outcome.assumptions.push(format!(
            "Character: only the {} trivial-character newforms of level {} were sieved; the remote source lists {n} newforms with nontrivial character at this level.",
            forms.len(),
            32 * q
        ));
    }
    Ok(outcome)
}
