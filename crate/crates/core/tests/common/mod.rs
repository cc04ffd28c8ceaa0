#![allow(dead_code)]

use quartic_fermat::newform::{bundled_levels, NewformRecord, NewformStore, StoreConfig};

pub fn offline_store() -> NewformStore {
    NewformStore::new(StoreConfig::offline())
}

pub fn bundled_forms() -> Vec<NewformRecord> {
    let store = offline_store();
    bundled_levels()
        .iter()
        .flat_map(|&l| store.fetch_level(l).unwrap())
        .collect()
}

pub fn form(level: u64, label: &str) -> NewformRecord {
    offline_store()
        .fetch_level(level)
        .unwrap()
        .into_iter()
        .find(|f| f.label == label)
        .unwrap()
}

pub fn cm_form() -> NewformRecord {
    form(32, "32.2.a.a")
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Brute force: some `u` with `u^4 = -1 (mod q)`.
pub fn fourth_root_of_minus_one(q: u64) -> bool {
    (1..q).any(|u| {
        let s = u * u % q;
        s * s % q == q - 1
    })
}

/// `(re, im)` products in `Z[i]` on `i128`.
pub fn cmul(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// `16 a4^2 (a2^2 - 4 a4)` for `a2 = 2(1+i)A`, `a4 = -B^2 + iA^2`.
pub fn discriminant_i128(a: i64, b: i64) -> (i128, i128) {
    let (a, b) = (a as i128, b as i128);
    let a2 = (2 * a, 2 * a);
    let a4 = (-b * b, a * a);
    let a2sq = cmul(a2, a2);
    let inner = (a2sq.0 - 4 * a4.0, a2sq.1 - 4 * a4.1);
    let a4sq = cmul(a4, a4);
    let d = cmul(a4sq, inner);
    (16 * d.0, 16 * d.1)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
