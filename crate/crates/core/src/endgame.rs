//! Checks for a survivor of the sieve that is congruent to the level-32 CM
//! form: the congruence itself up to the Sturm bound, the vanishing of its
//! eigenvalues at inert primes, and the valuation of the Frey discriminant
//! at the primes above `q`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frey::{build_curve, discriminant};
use crate::kernel::factor::{factorize, is_prime_u64, primes_up_to};
use crate::kernel::ffield::{
    factor_mod_p, irreducible_of_degree, poly_rem, roots_of_split, ExtensionField, FactorModP,
    Field, PolyDisplay, PrimeField,
};
use crate::kernel::gaussian::{gaussian_valuation, prime_above};
use crate::kernel::NumberFieldElement;
use crate::newform::NewformRecord;

pub const CITED_THEOREMS: [&str; 4] = [
    "Sturm: two weight-2 forms on Gamma0(N) whose coefficients agree modulo a prime up to the Sturm bound agree modulo that prime in every coefficient.",
    "CM image: a newform with complex multiplication by Q(i) has mod-l image in the normalizer of a Cartan subgroup, which is split when l = 1 mod 4; for l = 17 it is split.",
    "Ellenberg and Momose: for the Q-curves E_(A,B) and p > 13 the projective mod-p image is not contained in the normalizer of a split Cartan subgroup.",
    "Level lowering at q: a representation arising from a form of level 32 is unramified at q, which for E_(A,B) requires p to divide the valuation of the discriminant at each prime above q.",
];

/// `(k / 12) N prod_{p | N} (1 + 1/p)`, which must be an integer.
pub fn sturm_bound(n: u64, k: u64) -> Result<u64> {
    if n == 0 || k < 2 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "Sturm bound needs N >= 1 and even k >= 2, got N = {n}, k = {k}"
        )));
    }
    let f = factorize(&BigInt::from(n))?;
    let mut num = BigUint::from(n) * k;
    let mut den = BigUint::from(12u8);
    for p in f.primes.keys() {
        num *= p + 1u8;
        den *= p;
    }
    let (b, r) = num.div_rem(&den);
    if r != BigUint::from(0u8) {
        return Err(Error::invalid(format!(
            "Sturm bound for N = {n}, k = {k} is not an integer"
        )));
    }
    u64::try_from(b).map_err(|_| Error::invalid("Sturm bound overflows"))
}

/// Reduce field coordinates mod `l`; `None` when a denominator is divisible
/// by `l`.
fn reduce_coords(f: &PrimeField, e: &NumberFieldElement) -> Option<Vec<u64>> {
    e.coords().iter().map(|c| f.reduce_rational(c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairAttempt {
    pub factor_a: String,
    pub factor_b: String,
    /// First index at which the reductions differ, for every embedding.
    pub first_failure: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCertificate {
    pub form_a: String,
    pub form_b: String,
    pub modulus: u64,
    pub prime_above_a: Option<String>,
    pub prime_above_b: Option<String>,
    pub bound: u64,
    pub indices_checked: Vec<u64>,
    pub attempts: Vec<PairAttempt>,
    pub holds: bool,
}

/// Reductions of `a_n` for `n` in `indices` at a prime above `l` given by
/// the factor `g`, as elements of `ext` via the root `root` of `g`.
fn reductions(
    form: &NewformRecord,
    base: &PrimeField,
    ext: &ExtensionField,
    root: &[u64],
    indices: &[u64],
) -> Result<Vec<Vec<u64>>> {
    indices
        .iter()
        .map(|&n| {
            let e = form.a(n as usize)?;
            let c = reduce_coords(base, e).ok_or_else(|| {
                Error::invalid(format!(
                    "{}: a_{n} is not integral at {} in the power basis",
                    form.label,
                    base.characteristic()
                ))
            })?;
            Ok(ext.eval_base_poly(&c, root))
        })
        .collect()
}

fn embed(ext: &ExtensionField, g: &[u64]) -> Vec<Vec<u64>> {
    g.iter().map(|&c| ext.embed_u64(c)).collect()
}

/// Test `a_n = b_n` modulo primes above `l` for every `n` up to the Sturm
/// bound of the lcm level with `gcd(n, lcm) = 1`, over every pair of primes
/// above `l` in the two Hecke fields.
pub fn verify_congruence(
    a: &NewformRecord,
    b: &NewformRecord,
    l: u64,
) -> Result<CongruenceCertificate> {
    let base = PrimeField::new(l)?;
    let level = a.level.lcm(&b.level);
    let bound = sturm_bound(level, 2)?;
    for f in [a, b] {
        if (f.num_an() as u64) < bound {
            return Err(Error::MissingCoefficient {
                label: f.label.clone(),
                n: bound as usize,
                available: f.num_an(),
            });
        }
    }
    let indices: Vec<u64> = (1..=bound).filter(|n| n.gcd(&level) == 1).collect();
    let factors_a = factor_mod_p(&base, &base.reduce_poly(a.field_poly()));
    let factors_b = factor_mod_p(&base, &base.reduce_poly(b.field_poly()));
    let mut cert = CongruenceCertificate {
        form_a: a.label.clone(),
        form_b: b.label.clone(),
        modulus: l,
        prime_above_a: None,
        prime_above_b: None,
        bound,
        indices_checked: indices.clone(),
        attempts: Vec::new(),
        holds: false,
    };
    for fa in &factors_a {
        for fb in &factors_b {
            let first_failure = compare_at(a, b, fa, fb, &base, &indices)?;
            let attempt = PairAttempt {
                factor_a: PolyDisplay(&fa.factor).to_string(),
                factor_b: PolyDisplay(&fb.factor).to_string(),
                first_failure,
            };
            if first_failure.is_none() && !cert.holds {
                cert.holds = true;
                cert.prime_above_a = Some(attempt.factor_a.clone());
                cert.prime_above_b = Some(attempt.factor_b.clone());
            }
            cert.attempts.push(attempt);
        }
    }
    Ok(cert)
}

/// Fix one root of `fa` in a common extension and try every root of `fb`.
/// Returns `None` if some embedding matches at all indices, otherwise the
/// largest first-failure index over the embeddings.
fn compare_at(
    a: &NewformRecord,
    b: &NewformRecord,
    fa: &FactorModP,
    fb: &FactorModP,
    base: &PrimeField,
    indices: &[u64],
) -> Result<Option<u64>> {
    let d = fa.degree().lcm(&fb.degree());
    let ext = ExtensionField::new(*base, irreducible_of_degree(base, d))?;
    let ra = roots_of_split(&ext, &embed(&ext, &fa.factor))
        .into_iter()
        .next()
        .expect("an irreducible factor has a root in the extension");
    let red_a = reductions(a, base, &ext, &ra, indices)?;
    let mut latest_failure = 0;
    for rb in roots_of_split(&ext, &embed(&ext, &fb.factor)) {
        let red_b = reductions(b, base, &ext, &rb, indices)?;
        match red_a.iter().zip(&red_b).position(|(x, y)| x != y) {
            None => return Ok(None),
            Some(i) => latest_failure = latest_failure.max(indices[i]),
        }
    }
    Ok(Some(latest_failure))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroPattern {
    pub form: String,
    pub modulus: u64,
    pub bound: u64,
    /// Factor of the field polynomial mod `l` at which every checked
    /// eigenvalue vanishes.
    pub prime_above: Option<String>,
    pub primes_checked: Vec<u64>,
    pub holds: bool,
}

/// Whether `b_t = 0` modulo a single prime above `l` for every prime
/// `t = 3 (mod 4)`, `t <= bound`, `t` not dividing the level.
pub fn zero_trace_pattern(form: &NewformRecord, l: u64, bound: u64) -> Result<ZeroPattern> {
    let base = PrimeField::new(l)?;
    let primes: Vec<u64> = primes_up_to(bound)
        .into_iter()
        .filter(|t| t % 4 == 3 && form.level % t != 0)
        .collect();
    let mut reduced = Vec::with_capacity(primes.len());
    for &t in &primes {
        let e = form.a(t as usize)?;
        reduced.push(reduce_coords(&base, e));
    }
    let mut out = ZeroPattern {
        form: form.label.clone(),
        modulus: l,
        bound,
        prime_above: None,
        primes_checked: primes,
        holds: false,
    };
    for g in factor_mod_p(&base, &base.reduce_poly(form.field_poly())) {
        let vanishes = reduced.iter().all(|c| match c {
            Some(c) => poly_rem(&base, c, &g.factor).is_empty(),
            None => false,
        });
        if vanishes {
            out.holds = true;
            out.prime_above = Some(PolyDisplay(&g.factor).to_string());
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationResidue {
    pub a: i64,
    pub b: i64,
    pub q: u64,
    pub p: u64,
    pub pi: String,
    pub pi_bar: String,
    pub v_pi: u32,
    pub v_pi_bar: u32,
    pub residues: (u64, u64),
}

/// Valuations of the discriminant of `E_(A,B)` at the two primes of `Z[i]`
/// above `q`, reduced mod `p`. Requires `A^4 + B^4 = q C^p` locally at `q`,
/// i.e. `v_q(A^4 + B^4) = 1 (mod p)`; then the residues are `{1, 2}`.
pub fn valuation_residue(a: i64, b: i64, q: u64, p: u64) -> Result<ValuationResidue> {
    if !is_prime_u64(q) || q % 8 != 1 {
        return Err(Error::invalid(format!("q = {q} must be a prime = 1 mod 8")));
    }
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    let curve = build_curve(a, b)?;
    let sum = BigInt::from(a).pow(4) + BigInt::from(b).pow(4);
    let qb = BigInt::from(q);
    let mut v_sum = 0u64;
    let mut rest = sum.clone();
    while rest.is_multiple_of(&qb) && rest != BigInt::from(0) {
        rest /= &qb;
        v_sum += 1;
    }
    if v_sum == 0 {
        return Err(Error::invalid(format!("{q} does not divide {a}^4 + {b}^4")));
    }
    if v_sum % p != 1 % p {
        return Err(Error::invalid(format!(
            "v_{q}({a}^4 + {b}^4) = {v_sum} is not 1 mod {p}, so the sum is not q C^{p} at {q}"
        )));
    }
    let pi = prime_above(q)?;
    let pi_bar = pi.conj();
    let delta = discriminant(&curve);
    let v_pi = gaussian_valuation(&delta, &pi)?;
    let v_pi_bar = gaussian_valuation(&delta, &pi_bar)?;
    let residues = (u64::from(v_pi) % p, u64::from(v_pi_bar) % p);
    let ok = |r: u64| r == 1 || r == 2;
    if !ok(residues.0) || !ok(residues.1) {
        return Err(Error::OracleDisagreement(format!(
            "valuations ({v_pi}, {v_pi_bar}) at primes above {q} give residues {residues:?} mod {p}, not in {{1, 2}}"
        )));
    }
    Ok(ValuationResidue {
        a,
        b,
        q,
        p,
        pi: pi.to_string(),
        pi_bar: pi_bar.to_string(),
        v_pi,
        v_pi_bar,
        residues,
    })
}

/// Small coprime `(A, B)` with `A` even and `q || A^4 + B^4`.
pub fn valuation_witnesses(q: u64, count: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in 1i64..200 {
        for a in (2i64..200).step_by(2) {
            if out.len() == count {
                return out;
            }
            if a.gcd(&b) != 1 {
                continue;
            }
            let s = (a as i128).pow(4) + (b as i128).pow(4);
            let q = q as i128;
            if s % q == 0 && (s / q) % q != 0 {
                out.push((a, b));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationArgument {
    pub statement: String,
    pub spot_checks: Vec<ValuationResidue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndgameCertificate {
    pub congruence: CongruenceCertificate,
    #[serde(serialize_with = "serialize_holds")]
    pub zero_pattern: ZeroPattern,
    pub valuation_argument: ValuationArgument,
    pub cited_theorems: Vec<String>,
}

fn serialize_holds<S: serde::Serializer>(
    z: &ZeroPattern,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_bool(z.holds)
}

impl EndgameCertificate {
    pub fn all_checks_pass(&self) -> bool {
        self.congruence.holds
            && self.zero_pattern.holds
            && !self.valuation_argument.spot_checks.is_empty()
    }
}

/// Number of `(A, B)` pairs used as valuation spot checks.
pub const SPOT_CHECKS: usize = 8;

/// Run every computable check for a survivor `(q, p)` against the CM form.
pub fn run_endgame(
    q: u64,
    p: u64,
    survivor: &NewformRecord,
    cm_form: &NewformRecord,
) -> Result<EndgameCertificate> {
    let congruence = verify_congruence(survivor, cm_form, p)?;
    let zero_pattern = zero_trace_pattern(survivor, p, congruence.bound)?;
    let spot_checks = valuation_witnesses(q, SPOT_CHECKS)
        .into_iter()
        .map(|(a, b)| valuation_residue(a, b, q, p))
        .collect::<Result<Vec<_>>>()?;
    let statement = format!(
        "If A^4 + B^4 = {q} C^{p} with gcd(A, B) = 1, the discriminant of E_(A,B) has valuation 1 + {p}k at one prime above {q} and 2(1 + {p}k) at the other, so neither is divisible by {p}. A congruence with the level-32 form would force both to be divisible by {p}."
    );
    Ok(EndgameCertificate {
        congruence,
        zero_pattern,
        valuation_argument: ValuationArgument {
            statement,
            spot_checks,
        },
        cited_theorems: CITED_THEOREMS.iter().map(|s| s.to_string()).collect(),
    })
}
