//! Client for the LMFDB JSON API.
//!
//! Newforms come from `mf_newforms` (label, dimension, field polynomial,
//! CM discriminants, traces) and their eigenvalues from `mf_hecke_nf`, where
//! each `a_p` is given in an integral basis of the Hecke ring:
//! basis element `j` is `(sum_k numerators[j][k] y^k) / denominators[j]`.
//! Coefficients are converted to the power basis and `a_n` is rebuilt from
//! the `a_p` by the Hecke recursion.

use std::path::PathBuf;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use super::cache::archive_raw;
use super::{coefficients_from_primes, NewformRecord, Source};
use crate::error::{Error, Result};
use crate::json::number_to_bigint;
use crate::kernel::factor::primes_up_to;
use crate::kernel::{IntPolynomial, NumberField, NumberFieldElement};

const PAGE_FIELDS: &str = "label,dim,field_poly,cm_discs,traces";
const HECKE_FIELDS: &str =
    "label,field_poly,hecke_ring_numerators,hecke_ring_denominators,hecke_ring_cyclotomic_generator,ap,maxp";
const TIMEOUT: Duration = Duration::from_secs(60);

pub struct LmfdbClient {
    base: String,
    http: reqwest::blocking::Client,
    min_interval: Duration,
    last_request: Mutex<Option<Instant>>,
    archive_dir: Option<PathBuf>,
}

fn parse_err(field: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        detail: detail.into(),
    }
}

fn as_int(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => number_to_bigint(n).map_err(|e| parse_err(field, e)),
        _ => Err(parse_err(field, format!("expected an integer, got {v}"))),
    }
}

fn as_array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(field, format!("expected an array, got {v}")))
}

fn int_list(v: &Value, field: &str) -> Result<Vec<BigInt>> {
    as_array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_int(x, &format!("{field}[{i}]")))
        .collect()
}

/// The Hecke-ring basis expressed in the power basis of the field.
struct RingBasis {
    rows: Vec<Vec<BigRational>>,
}

impl RingBasis {
    fn parse(entry: &Value, dim: usize) -> Result<Self> {
        let nums = as_array(&entry["hecke_ring_numerators"], "hecke_ring_numerators")?;
        let dens = int_list(&entry["hecke_ring_denominators"], "hecke_ring_denominators")?;
        if nums.len() != dim || dens.len() != dim {
            return Err(parse_err(
                "hecke_ring_numerators",
                format!(
                    "basis of size {} / {} for dimension {dim}",
                    nums.len(),
                    dens.len()
                ),
            ));
        }
        let mut rows = Vec::with_capacity(dim);
        for (j, (row, den)) in nums.iter().zip(&dens).enumerate() {
            let field = format!("hecke_ring_numerators[{j}]");
            let row = int_list(row, &field)?;
            if row.len() > dim || den.is_zero() {
                return Err(parse_err(field, "basis element is not in the field"));
            }
            let mut r: Vec<BigRational> = row
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect();
            r.resize(dim, BigRational::zero());
            rows.push(r);
        }
        Ok(RingBasis { rows })
    }

    fn to_power_basis(&self, coeffs: &[BigInt], field: &str) -> Result<Vec<BigRational>> {
        if coeffs.len() != self.rows.len() {
            return Err(parse_err(
                field,
                format!(
                    "{} coordinates for a basis of size {}",
                    coeffs.len(),
                    self.rows.len()
                ),
            ));
        }
        let dim = self.rows.len();
        let mut out = vec![BigRational::zero(); dim];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += b * BigRational::from_integer(c.clone());
            }
        }
        Ok(out)
    }
}

impl LmfdbClient {
    pub fn new(base: &str, min_interval: Duration) -> Result<Self> {
        let http = reqwest::blocking::Client::builder()
            .timeout(TIMEOUT)
            .user_agent(concat!("quartic-fermat/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| Error::Http(e.to_string()))?;
        Ok(LmfdbClient {
            base: base.trim_end_matches('/').to_string(),
            http,
            min_interval,
            last_request: Mutex::new(None),
            archive_dir: None,
        })
    }

    /// Archive every raw response under `dir/raw`.
    pub fn with_archive(mut self, dir: PathBuf) -> Self {
        self.archive_dir = Some(dir);
        self
    }

    fn pace(&self) {
        let mut last = self.last_request.lock().unwrap();
        if let Some(at) = *last {
            let elapsed = at.elapsed();
            if elapsed < self.min_interval {
                thread::sleep(self.min_interval - elapsed);
            }
        }
        *last = Some(Instant::now());
    }

    fn get(
        &self,
        collection: &str,
        query: &[(&str, String)],
        level: u64,
        name: &str,
    ) -> Result<Value> {
        self.pace();
        let url = format!("{}/api/{collection}/", self.base);
        let mut params: Vec<(&str, String)> = query.to_vec();
        params.push(("_format", "json".into()));
        let url = reqwest::Url::parse_with_params(&url, &params)
            .map_err(|e| Error::invalid(format!("source URL {url}: {e}")))?;
        let resp = self
            .http
            .get(url.clone())
            .send()
            .map_err(|e| Error::Unavailable(format!("{url}: {e}")))?;
        let status = resp.status();
        let body = resp
            .text()
            .map_err(|e| Error::Unavailable(format!("{url}: {e}")))?;
        if !status.is_success() {
            return Err(Error::Http(format!("{url}: status {status}")));
        }
        if let Some(dir) = &self.archive_dir {
            archive_raw(dir, level, name, &body)?;
        }
        serde_json::from_str(&body).map_err(|e| parse_err("response", e.to_string()))
    }

    fn newform_pages(
        &self,
        level: u64,
        extra: &[(&str, String)],
        fields: &str,
        archive_as: &str,
    ) -> Result<Vec<Value>> {
        let mut out = Vec::new();
        let mut offset = 0usize;
        loop {
            let mut query = vec![
                ("level", level.to_string()),
                ("weight", "2".to_string()),
                ("_fields", fields.to_string()),
                ("_offset", offset.to_string()),
            ];
            query.extend(extra.iter().cloned());
            let page = self.get(
                "mf_newforms",
                &query,
                level,
                &format!("{archive_as}_{offset}"),
            )?;
            let data = as_array(&page["data"], "data")?;
            out.extend(data.iter().cloned());
            offset += data.len();
            if data.is_empty() || page.get("next").is_none_or(Value::is_null) {
                break;
            }
        }
        Ok(out)
    }

    /// Newforms of weight 2 and trivial character at `level`, with at least
    /// `min_an` coefficients each.
    pub fn fetch_level(&self, level: u64, min_an: usize) -> Result<Vec<NewformRecord>> {
        let forms = self.newform_pages(
            level,
            &[("char_order", "1".into())],
            PAGE_FIELDS,
            "newforms",
        )?;
        let mut records = Vec::with_capacity(forms.len());
        for (i, entry) in forms.iter().enumerate() {
            records.push(self.record_from(level, i, entry, min_an)?);
        }
        records.sort_by(|a, b| a.label.cmp(&b.label));
        for r in &records {
            r.validate()?;
        }
        Ok(records)
    }

    /// Number of weight-2 newforms at `level` with nontrivial character.
    pub fn count_nontrivial_character_forms(&self, level: u64) -> Result<usize> {
        let all = self.newform_pages(level, &[], "label,char_order", "all_characters")?;
        Ok(all
            .iter()
            .filter(|f| f["char_order"].as_u64().is_some_and(|o| o > 1))
            .count())
    }

    fn record_from(
        &self,
        level: u64,
        idx: usize,
        entry: &Value,
        min_an: usize,
    ) -> Result<NewformRecord> {
        let at = |f: &str| format!("data[{idx}].{f}");
        let label = entry["label"]
            .as_str()
            .ok_or_else(|| parse_err(at("label"), "missing"))?
            .to_string();
        let dim = entry["dim"]
            .as_u64()
            .ok_or_else(|| parse_err(at("dim"), "missing"))? as usize;
        let cm_discriminant = match &entry["cm_discs"] {
            Value::Array(v) => v.first().and_then(Value::as_i64),
            _ => None,
        };
        let (field, an) = if dim == 1 {
            let field = NumberField::new(IntPolynomial::x())?;
            let traces = int_list(&entry["traces"], &at("traces"))?;
            if traces.len() < min_an {
                return Err(parse_err(
                    at("traces"),
                    format!("{} coefficients, {min_an} required", traces.len()),
                ));
            }
            let an = traces[..min_an]
                .iter()
                .map(|t| {
                    NumberFieldElement::from_rational(
                        field.clone(),
                        BigRational::from_integer(t.clone()),
                    )
                })
                .collect();
            (field, an)
        } else {
            self.eigenvalues(level, &label, dim, min_an)?
        };
        Ok(NewformRecord {
            level,
            label,
            dimension: dim,
            field,
            an,
            cm_discriminant,
            source: Source::Remote,
        })
    }

    fn eigenvalues(
        &self,
        level: u64,
        label: &str,
        dim: usize,
        min_an: usize,
    ) -> Result<(std::sync::Arc<NumberField>, Vec<NumberFieldElement>)> {
        let resp = self.get(
            "mf_hecke_nf",
            &[
                ("label", label.to_string()),
                ("_fields", HECKE_FIELDS.to_string()),
            ],
            level,
            &format!("hecke_nf_{label}"),
        )?;
        let entry = as_array(&resp["data"], "data")?
            .first()
            .ok_or_else(|| parse_err("data", format!("no eigenvalue data for {label}")))?;
        if entry["hecke_ring_cyclotomic_generator"]
            .as_u64()
            .unwrap_or(0)
            != 0
        {
            return Err(parse_err(
                "hecke_ring_cyclotomic_generator",
                "cyclotomic eigenvalue encoding is not supported",
            ));
        }
        let poly = IntPolynomial::new(int_list(&entry["field_poly"], "field_poly")?);
        if poly.degree() != Some(dim) {
            return Err(parse_err(
                "field_poly",
                format!("degree differs from dimension {dim}"),
            ));
        }
        let field = NumberField::new(poly).map_err(|e| parse_err("field_poly", e.to_string()))?;
        let basis = RingBasis::parse(entry, dim)?;
        let ap_raw = as_array(&entry["ap"], "ap")?;
        let primes = primes_up_to(min_an as u64);
        if ap_raw.len() < primes.len() {
            return Err(parse_err(
                "ap",
                format!(
                    "{} prime eigenvalues, {} required",
                    ap_raw.len(),
                    primes.len()
                ),
            ));
        }
        let mut ap = Vec::with_capacity(primes.len());
        for (k, v) in ap_raw.iter().take(primes.len()).enumerate() {
            let name = format!("ap[{k}]");
            let coords = basis.to_power_basis(&int_list(v, &name)?, &name)?;
            ap.push(NumberFieldElement::new(field.clone(), coords)?);
        }
        let lookup = |p: u64| primes.iter().position(|&q| q == p).map(|k| ap[k].clone());
        let an = coefficients_from_primes(&field, level, &lookup, min_an)
            .ok_or_else(|| parse_err("ap", "Hecke recursion ran out of prime eigenvalues"))?;
        Ok((field, an))
    }
}
