mod common;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use quartic_fermat::endgame::{valuation_residue, zero_trace_pattern};
use quartic_fermat::kernel::resultant::{subresultant, sylvester_resultant};
use quartic_fermat::kernel::sturm::roots_within_hasse_interval;
use quartic_fermat::kernel::{
    factorize, gaussian_valuation, is_prime, resultant, GaussianInteger, IntPolynomial,
    NumberField, NumberFieldElement,
};
use quartic_fermat::newform::eigenvalue_char_poly;
use quartic_fermat::sieve::{sieve_form, survivors_at, DEFAULT_P_MIN};

fn poly(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
    (
        prop::collection::vec(-20i64..=20, 0..=max_deg),
        1i64..=9,
        any::<bool>(),
    )
        .prop_map(|(mut c, lead, neg)| {
            c.push(if neg { -lead } else { lead });
            IntPolynomial::from_i64s(&c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn resultant_is_multiplicative(f in poly(4), g in poly(4), h in poly(4)) {
        let fg = &f * &g;
        prop_assert_eq!(
            resultant(&fg, &h).unwrap(),
            resultant(&f, &h).unwrap() * resultant(&g, &h).unwrap()
        );
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in poly(4), g in poly(4), k in poly(2)) {
        let shared = k.degree().unwrap() >= 1;
        let (ff, gg) = (&f * &k, &g * &k);
        if shared {
            prop_assert!(resultant(&ff, &gg).unwrap().is_zero());
        }
        let r = resultant(&f, &g).unwrap();
        let common = f.gcd(&g).degree().unwrap() >= 1;
        prop_assert_eq!(r.is_zero(), common);
        prop_assert_eq!(sylvester_resultant(&f, &g).unwrap(), subresultant(&f, &g).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn char_poly_annihilates(which in 0usize..4, coords in prop::collection::vec(-9i64..=9, 4)) {
        let fields = [
            &[-2i64, 0, 1][..],
            &[-1, -1, 0, 1],
            &[1, 0, 0, 0, 1],
            &[-1, -2, 1],
        ];
        let field = NumberField::new(IntPolynomial::from_i64s(fields[which])).unwrap();
        let d = field.degree();
        let c = coords[..d]
            .iter()
            .map(|&x| num_rational::BigRational::from_integer(x.into()))
            .collect();
        let e = NumberFieldElement::new(field, c).unwrap();
        let cp = e.char_poly();
        prop_assert_eq!(cp.degree(), Some(d));
        prop_assert!(e.eval_poly(&cp).is_zero());
    }

    #[test]
    fn gaussian_valuation_is_additive(
        x in (-300i64..300, -300i64..300),
        y in (-300i64..300, -300i64..300),
        which in 0usize..5,
    ) {
        prop_assume!(x != (0, 0) && y != (0, 0));
        let pis = [(1, 1), (3, 0), (2, 1), (2, -1), (3, 2)];
        let pi = GaussianInteger::new(pis[which].0, pis[which].1);
        let x = GaussianInteger::new(x.0, x.1);
        let y = GaussianInteger::new(y.0, y.1);
        let xy = &x * &y;
        prop_assert_eq!(
            gaussian_valuation(&xy, &pi).unwrap(),
            gaussian_valuation(&x, &pi).unwrap() + gaussian_valuation(&y, &pi).unwrap()
        );
    }

    #[test]
    fn factorization_multiplies_back(n in 1i64..i64::MAX, neg in any::<bool>()) {
        let n = if neg { -BigInt::from(n) } else { BigInt::from(n) };
        let f = factorize(&n).unwrap();
        prop_assert_eq!(BigInt::from(f.value()), n.abs());
        for p in f.primes.keys() {
            prop_assert!(is_prime(p));
        }
    }

    #[test]
    fn semiprimes_split(a in 1_000u64..3_000_000, b in 1_000u64..3_000_000) {
        let next = |mut n: u64| { while !common::is_prime(n) { n += 1; } n };
        let (p, q) = (next(a), next(b));
        let f = factorize(&(BigInt::from(p) * q)).unwrap();
        prop_assert!(f.cofactor.is_none());
        prop_assert!(f.primes.contains_key(&BigUint::from(p)));
        prop_assert!(f.primes.contains_key(&BigUint::from(q)));
    }
}

#[test]
fn discriminant_identity_on_grid() {
    use quartic_fermat::frey::{build_curve, discriminant, discriminant_factored};
    for a in (-50i64..=50).filter(|a| a % 2 == 0) {
        for b in (-50i64..=50).filter(|b| b % 2 != 0) {
            if common::gcd(a, b) != 1 {
                continue;
            }
            let (re, im) = common::discriminant_i128(a, b);
            let expected = GaussianInteger::new(re, im);
            let curve = build_curve(a, b).unwrap();
            assert_eq!(discriminant(&curve), expected, "({a}, {b})");
            assert_eq!(discriminant_factored(a, b), expected, "({a}, {b})");
        }
    }
}

#[test]
fn divisor_residue_on_coprime_pairs() {
    use quartic_fermat::classifier::check_divisor_residue;
    for a in 1i64..=200 {
        for b in 1i64..=200 {
            if common::gcd(a, b) == 1 && a + b > 2 {
                assert!(check_divisor_residue(a, b).unwrap(), "({a}, {b})");
            }
        }
    }
}

#[test]
fn valuation_residues_on_grid() {
    let primes_1_mod_8: Vec<u64> = (17..=2 * 60u64.pow(4))
        .step_by(8)
        .filter(|&q| common::is_prime(q))
        .collect();
    let mut checked = 0;
    for a in (2i64..=60).step_by(2) {
        for b in 1i64..=60 {
            if common::gcd(a, b) != 1 {
                continue;
            }
            let s = (a as u128).pow(4) + (b as u128).pow(4);
            for &q in primes_1_mod_8
                .iter()
                .filter(|&&q| s.is_multiple_of(q as u128))
            {
                let mut v = 0;
                let mut r = s;
                while r.is_multiple_of(q as u128) {
                    r /= q as u128;
                    v += 1;
                }
                for p in [17u64, 19, 23] {
                    let res = valuation_residue(a, b, q, p);
                    if v % p == 1 {
                        let res = res.unwrap();
                        assert!([1, 2].contains(&res.residues.0), "{res:?}");
                        assert!([1, 2].contains(&res.residues.1), "{res:?}");
                        assert_ne!(res.residues.0, res.residues.1);
                        checked += 1;
                    } else {
                        assert!(res.is_err());
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn every_bundled_eigenvalue_lies_in_the_hasse_interval() {
    for f in common::bundled_forms() {
        for t in [3u64, 7, 11, 19] {
            if f.level % t == 0 {
                continue;
            }
            let cp = eigenvalue_char_poly(&f, t as usize).unwrap();
            assert!(roots_within_hasse_interval(&cp, t), "{} at {t}", f.label);
        }
    }
}

#[test]
fn cm_form_vanishes_at_inert_primes() {
    let f = common::cm_form();
    for l in [5, 13, 17] {
        assert!(zero_trace_pattern(&f, l, 592).unwrap().holds);
    }
}

const T_POOL: [u64; 6] = [3, 7, 11, 19, 23, 31];

fn subset(mask: u8) -> Vec<u64> {
    T_POOL
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &t)| t)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sieve_is_monotone_in_tset(small in 1u8..64, extra in 0u8..64, which in 0usize..12) {
        let forms = common::offline_store().fetch_level(2336).unwrap();
        let f = &forms[which % forms.len()];
        let a = subset(small);
        let b = subset(small | extra);
        let ra = sieve_form(f, &a, DEFAULT_P_MIN).unwrap();
        let rb = sieve_form(f, &b, DEFAULT_P_MIN).unwrap();
        prop_assert!(rb.survivors.is_subset(&ra.survivors));
    }

    #[test]
    fn genuine_congruence_is_never_sieved_away(mask in 1u8..64) {
        let f = common::form(2336, "2336.2.a.l");
        let r = sieve_form(&f, &subset(mask), DEFAULT_P_MIN).unwrap();
        prop_assert!(r.survivors.contains(&BigUint::from(17u8)));
    }
}

#[test]
fn survivors_at_contains_t() {
    for f in common::offline_store().fetch_level(2336).unwrap() {
        for t in [3u64, 7, 11, 19] {
            let s = survivors_at(&f, t).unwrap();
            assert!(s.primes.contains(&BigUint::from(t)), "{} at {t}", f.label);
        }
    }
}
