//! The per-level JSON cache document.
//!
//! `{"level":N,"weight":2,"forms":[{"label":..,"dimension":..,"field_poly":[..],
//! "an":[[[num,den],..],..],"cm_discriminant":..}]}`, written compactly with
//! keys in that order. `field_poly` lists coefficients from the constant
//! term up; each `a_n` lists its power-basis coordinates.

use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{bundled_snapshot, rational, NewformRecord, Source};
use crate::error::{Error, Result};
use crate::json::{big_number, number_to_bigint};
use crate::kernel::{IntPolynomial, NumberField, NumberFieldElement};
use crate::report::write_atomic;

const LOCK_ATTEMPTS: u32 = 100;
const LOCK_WAIT: Duration = Duration::from_millis(100);

#[derive(Debug, Serialize, Deserialize)]
pub struct LevelDocument {
    pub level: u64,
    pub weight: u64,
    pub forms: Vec<FormDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FormDocument {
    pub label: String,
    pub dimension: usize,
    pub field_poly: Vec<Number>,
    pub an: Vec<Vec<[Number; 2]>>,
    pub cm_discriminant: Option<i64>,
}

fn parse_err(field: String, detail: impl Into<String>) -> Error {
    Error::Parse {
        field,
        detail: detail.into(),
    }
}

fn int(n: &Number, field: impl Fn() -> String) -> Result<BigInt> {
    number_to_bigint(n).map_err(|e| parse_err(field(), e))
}

impl FormDocument {
    fn from_record(r: &NewformRecord) -> Self {
        FormDocument {
            label: r.label.clone(),
            dimension: r.dimension,
            field_poly: r.field_poly().coeffs().iter().map(big_number).collect(),
            an: r
                .an
                .iter()
                .map(|a| {
                    a.coords()
                        .iter()
                        .map(|c| [big_number(c.numer()), big_number(c.denom())])
                        .collect()
                })
                .collect(),
            cm_discriminant: r.cm_discriminant,
        }
    }

    fn to_record(&self, level: u64, idx: usize, source: Source) -> Result<NewformRecord> {
        let at = |f: &str| format!("forms[{idx}].{f}");
        let coeffs = self
            .field_poly
            .iter()
            .enumerate()
            .map(|(k, n)| int(n, || at(&format!("field_poly[{k}]"))))
            .collect::<Result<Vec<_>>>()?;
        let field = NumberField::new(IntPolynomial::new(coeffs))
            .map_err(|e| parse_err(at("field_poly"), e.to_string()))?;
        let mut an = Vec::with_capacity(self.an.len());
        for (n, coords) in self.an.iter().enumerate() {
            let here = || at(&format!("an[{n}]"));
            let coords = coords
                .iter()
                .map(|[num, den]| rational(int(num, here)?, int(den, here)?))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| parse_err(here(), e.to_string()))?;
            an.push(
                NumberFieldElement::new(field.clone(), coords)
                    .map_err(|e| parse_err(here(), e.to_string()))?,
            );
        }
        Ok(NewformRecord {
            level,
            label: self.label.clone(),
            dimension: self.dimension,
            field,
            an,
            cm_discriminant: self.cm_discriminant,
            source,
        })
    }
}

/// Serialize the records of one level.
pub fn encode_level(level: u64, records: &[NewformRecord]) -> String {
    let doc = LevelDocument {
        level,
        weight: 2,
        forms: records.iter().map(FormDocument::from_record).collect(),
    };
    serde_json::to_string(&doc).expect("level document serializes")
}

/// Parse and validate a level document.
pub fn decode_level(text: &str, source: Source) -> Result<Vec<NewformRecord>> {
    let doc: LevelDocument =
        serde_json::from_str(text).map_err(|e| parse_err("document".into(), e.to_string()))?;
    if doc.weight != 2 {
        return Err(parse_err(
            "weight".into(),
            format!("expected 2, got {}", doc.weight),
        ));
    }
    let records = doc
        .forms
        .iter()
        .enumerate()
        .map(|(i, f)| f.to_record(doc.level, i, source))
        .collect::<Result<Vec<_>>>()?;
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

pub fn cache_path(dir: &Path, level: u64) -> PathBuf {
    dir.join(format!("level_{level}.json"))
}

fn lock_path(dir: &Path, level: u64) -> PathBuf {
    dir.join(format!("level_{level}.lock"))
}

/// Load a cached level. Records are tagged `bundled` when the file is
/// byte-identical to the bundled snapshot.
pub fn load_cached(dir: &Path, level: u64) -> Result<Vec<NewformRecord>> {
    let path = cache_path(dir, level);
    if !path.exists() {
        return Err(Error::MissingFile(path));
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let source = match bundled_snapshot(level) {
        Some(b) if b == text => Source::Bundled,
        _ => Source::Remote,
    };
    decode_level(&text, source)
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn acquire_lock(dir: &Path, level: u64) -> Result<LockGuard> {
    let path = lock_path(dir, level);
    for _ in 0..LOCK_ATTEMPTS {
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => return Ok(LockGuard(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => thread::sleep(LOCK_WAIT),
            Err(e) => return Err(Error::io(&path, e)),
        }
    }
    Err(Error::io(
        &path,
        std::io::Error::new(std::io::ErrorKind::WouldBlock, "cache lock held"),
    ))
}

/// Store the records of one level under the cache lock.
pub fn store_cached(dir: &Path, level: u64, records: &[NewformRecord]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let _lock = acquire_lock(dir, level)?;
    let path = cache_path(dir, level);
    write_atomic(&path, encode_level(level, records).as_bytes())?;
    Ok(path)
}

/// Store the verbatim text of the bundled snapshot, so a later load is
/// byte-identical to it.
pub(crate) fn store_text(dir: &Path, level: u64, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let _lock = acquire_lock(dir, level)?;
    let path = cache_path(dir, level);
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}

/// Archive a raw remote response beside the cache.
pub(crate) fn archive_raw(dir: &Path, level: u64, name: &str, body: &str) -> Result<()> {
    let path = dir.join("raw").join(format!("level_{level}_{name}.json"));
    write_atomic(&path, body.as_bytes())
}
