//! Sieve and endgame reports: JSON documents on disk and a markdown view of
//! the same content.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::endgame::EndgameCertificate;
use crate::error::{Error, Result};
use crate::sieve::SieveOutcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Markdown => "md",
        }
    }
}

/// Write `contents` to `path` atomically (temporary file, then rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents)
        .map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn report_path(dir: &Path, q: u64, format: Format) -> PathBuf {
    dir.join(format!("sieve_{q}.{}", format.extension()))
}

pub fn sieve_report(outcome: &SieveOutcome) -> Result<Value> {
    Ok(serde_json::to_value(outcome)?)
}

/// Add (or replace) the `endgame` entry.
pub fn attach_endgame(report: &mut Value, cert: &EndgameCertificate) -> Result<()> {
    let obj = report
        .as_object_mut()
        .ok_or_else(|| Error::invalid("report is not a JSON object"))?;
    obj.insert("endgame".into(), serde_json::to_value(cert)?);
    Ok(())
}

pub fn to_json_text(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn read_report(path: &Path) -> Result<Value> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Whether `global_survivors` lists `(label, p)`.
pub fn has_survivor(report: &Value, label: &str, p: u64) -> bool {
    report["global_survivors"]
        .as_array()
        .map(|v| {
            v.iter()
                .any(|s| s["label"] == label && s["p"].as_u64() == Some(p))
        })
        .unwrap_or(false)
}

fn prime_set(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => list(a),
        Value::Object(o) => {
            let primes = o.get("primes").and_then(Value::as_array);
            let head = primes.map(|a| list(a)).unwrap_or_default();
            format!(
                "{head} and all p >= {}",
                o.get("all_from").map(plain).unwrap_or_default()
            )
        }
        other => plain(other),
    }
}

fn list(a: &[Value]) -> String {
    let items: Vec<String> = a.iter().map(plain).collect();
    format!("{{{}}}", items.join(", "))
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Markdown rendering of a report document.
pub fn render_markdown(report: &Value) -> String {
    let mut out = String::new();
    let q = plain(&report["q"]);
    let _ = writeln!(out, "# Sieve report, q = {q}\n");
    let tset: Vec<String> = report["tset"]
        .as_array()
        .map(|a| a.iter().map(plain).collect())
        .unwrap_or_default();
    let _ = writeln!(out, "- sieve primes t: {}", tset.join(", "));
    let _ = writeln!(out, "- p_min: {}", plain(&report["p_min"]));
    let _ = writeln!(out, "- proved by the sieve: {}", plain(&report["proved"]));
    if let Some(v) = report.get("overall_proved") {
        let _ = writeln!(out, "- proved including the endgame: {}", plain(v));
    }

    let _ = writeln!(out, "\n## Forms\n");
    let mut header = String::from("| label |");
    let mut rule = String::from("|---|");
    for t in &tset {
        let _ = write!(header, " t = {t} |");
        rule.push_str("---|");
    }
    header.push_str(" survivors |");
    rule.push_str("---|");
    let _ = writeln!(out, "{header}\n{rule}");
    let forms = report["forms"].as_array().cloned().unwrap_or_default();
    for f in &forms {
        let mut row = format!("| {} |", plain(&f["label"]));
        for t in &tset {
            let _ = write!(row, " {} |", prime_set(&f["per_t"][t.as_str()]));
        }
        let _ = write!(row, " {} |", prime_set(&f["survivors"]));
        let _ = writeln!(out, "{row}");
    }

    let _ = writeln!(out, "\n## Global survivors\n");
    match report["global_survivors"].as_array() {
        Some(v) if !v.is_empty() => {
            for s in v {
                let _ = writeln!(out, "- {}: p = {}", plain(&s["label"]), prime_set(&s["p"]));
            }
        }
        _ => out.push_str("None.\n"),
    }

    let _ = writeln!(out, "\n## Assumptions\n");
    for a in report["assumptions"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "- {}", plain(a));
    }

    if let Some(e) = report.get("endgame") {
        render_endgame(&mut out, e);
    }

    let _ = writeln!(out, "\n## Resultant audit\n");
    let _ = writeln!(out, "| label | t | c | resultant | primes | unfactored |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for f in &forms {
        for r in f["resultant_audit"].as_array().into_iter().flatten() {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                plain(&f["label"]),
                plain(&r["t"]),
                plain(&r["c"]),
                plain(&r["resultant"]),
                prime_set(&r["primes"]),
                plain(&r["unfactored"]),
            );
        }
    }
    out
}

fn render_endgame(out: &mut String, e: &Value) {
    let c = &e["congruence"];
    let _ = writeln!(out, "\n## Endgame\n");
    let _ = writeln!(
        out,
        "- congruence {} = {} mod {}: {} (bound {}, {} indices checked)",
        plain(&c["form_a"]),
        plain(&c["form_b"]),
        plain(&c["modulus"]),
        if c["holds"] == true { "holds" } else { "fails" },
        plain(&c["bound"]),
        c["indices_checked"].as_array().map_or(0, Vec::len),
    );
    let _ = writeln!(
        out,
        "- primes above the modulus: {} and {}",
        plain(&c["prime_above_a"]),
        plain(&c["prime_above_b"])
    );
    let _ = writeln!(out, "- zero trace pattern: {}", plain(&e["zero_pattern"]));
    let v = &e["valuation_argument"];
    let _ = writeln!(out, "- valuation argument: {}", plain(&v["statement"]));
    for s in v["spot_checks"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "  - (A, B) = ({}, {}): valuations {} at {} and {} at {}",
            plain(&s["a"]),
            plain(&s["b"]),
            plain(&s["v_pi"]),
            plain(&s["pi"]),
            plain(&s["v_pi_bar"]),
            plain(&s["pi_bar"]),
        );
    }
    let _ = writeln!(out, "\nCited theorems:\n");
    for t in e["cited_theorems"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "- {}", plain(t));
    }
}
