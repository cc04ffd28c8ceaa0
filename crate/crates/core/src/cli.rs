//! The `quartic-fermat` command line.
//!
//! Exit codes: 0 proved or success, 1 survivors remain or an endgame check
//! failed, 2 usage or argument error (and any other failure), 3 method
//! inapplicable to `q`, 4 newform data unavailable.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::classifier::classify;
use crate::endgame::{run_endgame, EndgameCertificate};
use crate::error::{Error, Result};
use crate::newform::{
    NewformRecord, NewformStore, StoreConfig, DEFAULT_MIN_AN, DEFAULT_SOURCE_URL,
};
use crate::report::{
    attach_endgame, has_survivor, read_report, render_markdown, report_path, sieve_report,
    to_json_text, write_atomic, Format,
};
use crate::sieve::{sieve_level, SurvivorPrime};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_SURVIVORS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_UNAVAILABLE: i32 = 4;

/// Level of the CM form the endgame compares against.
const CM_LEVEL: u64 = 32;
const CM_DISCRIMINANT: i64 = -4;

#[derive(Debug, Parser)]
#[command(
    name = "quartic-fermat",
    version,
    about = "Eliminate exponents p in x^4 + y^4 = q z^p with a modular sieve",
    after_help = "Exit codes: 0 proved/success, 1 survivors remain, 2 usage error, \
                  3 method inapplicable, 4 data unavailable.\n\
                  Every option can also be set through the environment variable shown."
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Sieve primes t = 3 mod 4
    #[arg(
        long,
        global = true,
        env = "QF_TSET",
        value_delimiter = ',',
        default_value = "3,7,11,19"
    )]
    pub tset: Vec<u64>,
    /// Exponents below this are outside the method and reported separately
    #[arg(long, global = true, env = "QF_P_MIN", default_value_t = 14)]
    pub p_min: u64,
    /// Never touch the network; use the cache and bundled data only
    #[arg(long, global = true, env = "QF_OFFLINE")]
    pub offline: bool,
    /// Ignore the bundled newform snapshot
    #[arg(long, global = true, env = "QF_NO_BUNDLED")]
    pub no_bundled: bool,
    /// Newform cache directory
    #[arg(long, global = true, env = "QF_CACHE_DIR", default_value = "cache")]
    pub cache_dir: PathBuf,
    /// Base URL of the newform database API
    #[arg(long, global = true, env = "QF_SOURCE_URL", default_value = DEFAULT_SOURCE_URL)]
    pub source_url: String,
    /// Output format for stdout and the extra report file
    #[arg(
        long,
        global = true,
        env = "QF_FORMAT",
        value_enum,
        default_value = "json"
    )]
    pub format: FormatArg,
    /// Directory for sieve reports (`sieve_<q>.json`)
    #[arg(long, global = true, env = "QF_REPORT_DIR", default_value = "reports")]
    pub report_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a prime q
    Classify { q: u64 },
    /// Populate the cache with the newforms of a level
    Fetch { level: u64 },
    /// Run the sieve on the newforms of level 32q
    Sieve { q: u64 },
    /// Check a (q, p) survivor against the level-32 CM form
    Endgame { q: u64, p: u64, label: String },
    /// Classify, sieve, and run the endgame on a single survivor
    Prove { q: u64 },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source_url: String,
    pub cache_dir: PathBuf,
    pub tset: Vec<u64>,
    pub p_min: u64,
    pub offline: bool,
    pub use_bundled: bool,
    pub format: Format,
    pub report_dir: PathBuf,
}

impl From<ConfigArgs> for RunConfig {
    fn from(a: ConfigArgs) -> Self {
        RunConfig {
            source_url: a.source_url,
            cache_dir: a.cache_dir,
            tset: a.tset,
            p_min: a.p_min,
            offline: a.offline,
            use_bundled: !a.no_bundled,
            format: match a.format {
                FormatArg::Json => Format::Json,
                FormatArg::Md => Format::Markdown,
            },
            report_dir: a.report_dir,
        }
    }
}

impl RunConfig {
    pub fn store(&self) -> NewformStore {
        NewformStore::new(StoreConfig {
            cache_dir: Some(self.cache_dir.clone()),
            source_url: self.source_url.clone(),
            offline: self.offline,
            use_bundled: self.use_bundled,
            min_an: DEFAULT_MIN_AN,
            request_interval: Duration::from_secs(1),
        })
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::MethodInapplicable { .. } => EXIT_INAPPLICABLE,
        Error::Unavailable(_)
        | Error::Http(_)
        | Error::MissingCoefficient { .. }
        | Error::Parse { .. }
        | Error::InvariantViolation { .. } => EXIT_UNAVAILABLE,
        _ => EXIT_USAGE,
    }
}

/// A command's result: the exit code and what it prints on stdout.
struct Outcome {
    code: i32,
    stdout: String,
}

/// Parse `args` (including the program name) and run. Output goes to the
/// given writers.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_SUCCESS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = RunConfig::from(cli.config);
    let result = match cli.command {
        Command::Classify { q } => cmd_classify(&config, q),
        Command::Fetch { level } => cmd_fetch(&config, level),
        Command::Sieve { q } => cmd_sieve(&config, q),
        Command::Endgame { q, p, label } => cmd_endgame(&config, q, p, &label),
        Command::Prove { q } => cmd_prove(&config, q),
    };
    match result {
        Ok(o) => {
            let _ = write!(out, "{}", o.stdout);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_classify(config: &RunConfig, q: u64) -> Result<Outcome> {
    let c = classify(q)?;
    let stdout = match config.format {
        Format::Json => {
            let mut v = serde_json::to_value(c)?;
            v["summary"] = Value::String(c.to_string());
            if let Some(reason) = c.obstruction() {
                v["obstruction"] = Value::String(reason);
            }
            format!("{}\n", serde_json::to_string(&v)?)
        }
        Format::Markdown => match c.obstruction() {
            Some(reason) => format!("{c}\n\n{reason}\n"),
            None => format!("{c}\n"),
        },
    };
    Ok(Outcome {
        code: EXIT_SUCCESS,
        stdout,
    })
}

fn cmd_fetch(config: &RunConfig, level: u64) -> Result<Outcome> {
    let forms = config.store().fetch_level(level)?;
    let mut stdout = String::new();
    for f in &forms {
        stdout.push_str(&format!(
            "{}\tdim {}\t{} coefficients\t{}\n",
            f.label,
            f.dimension,
            f.num_an(),
            f.source
        ));
    }
    Ok(Outcome {
        code: EXIT_SUCCESS,
        stdout,
    })
}

/// Write the JSON report, plus the markdown view when asked for, and return
/// the stdout text in the configured format.
fn publish(config: &RunConfig, q: u64, report: &Value) -> Result<String> {
    let json = to_json_text(report);
    write_atomic(
        &report_path(&config.report_dir, q, Format::Json),
        json.as_bytes(),
    )?;
    Ok(match config.format {
        Format::Json => json,
        Format::Markdown => {
            let md = render_markdown(report);
            write_atomic(
                &report_path(&config.report_dir, q, Format::Markdown),
                md.as_bytes(),
            )?;
            md
        }
    })
}

fn sieve_value(config: &RunConfig, q: u64) -> Result<(Value, bool)> {
    let outcome = sieve_level(q, &config.tset, config.p_min, &config.store())?;
    Ok((sieve_report(&outcome)?, outcome.proved))
}

fn cmd_sieve(config: &RunConfig, q: u64) -> Result<Outcome> {
    let (report, proved) = sieve_value(config, q)?;
    Ok(Outcome {
        code: if proved { EXIT_SUCCESS } else { EXIT_SURVIVORS },
        stdout: publish(config, q, &report)?,
    })
}

fn cm_form(store: &NewformStore) -> Result<NewformRecord> {
    store
        .fetch_level(CM_LEVEL)?
        .into_iter()
        .find(|f| f.cm_discriminant == Some(CM_DISCRIMINANT))
        .ok_or_else(|| {
            Error::Unavailable(format!(
                "no CM form with discriminant {CM_DISCRIMINANT} at level {CM_LEVEL}"
            ))
        })
}

fn endgame_for(config: &RunConfig, q: u64, p: u64, label: &str) -> Result<EndgameCertificate> {
    let store = config.store();
    let survivor = store
        .fetch_level(32 * q)?
        .into_iter()
        .find(|f| f.label == label)
        .ok_or_else(|| Error::invalid(format!("no form {label} at level {}", 32 * q)))?;
    run_endgame(q, p, &survivor, &cm_form(&store)?)
}

fn cmd_endgame(config: &RunConfig, q: u64, p: u64, label: &str) -> Result<Outcome> {
    let path = report_path(&config.report_dir, q, Format::Json);
    let mut report = match read_report(&path) {
        Ok(r) => r,
        Err(Error::MissingFile(_)) => sieve_value(config, q)?.0,
        Err(e) => return Err(e),
    };
    if !has_survivor(&report, label, p) {
        publish(config, q, &report)?;
        return Err(Error::invalid(format!(
            "the sieve report for q = {q} has no survivor ({label}, p = {p})"
        )));
    }
    let cert = endgame_for(config, q, p, label)?;
    attach_endgame(&mut report, &cert)?;
    publish(config, q, &report)?;
    let stdout = match config.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&cert)?),
        Format::Markdown => render_markdown(&report),
    };
    Ok(Outcome {
        code: if cert.all_checks_pass() {
            EXIT_SUCCESS
        } else {
            EXIT_SURVIVORS
        },
        stdout,
    })
}

fn cmd_prove(config: &RunConfig, q: u64) -> Result<Outcome> {
    let class = classify(q)?;
    if let Some(reason) = class.obstruction() {
        return Err(Error::MethodInapplicable { q, reason });
    }
    let outcome = sieve_level(q, &config.tset, config.p_min, &config.store())?;
    let mut report = sieve_report(&outcome)?;
    let proved = match outcome.global_survivors.as_slice() {
        [] => true,
        [s] => match &s.p {
            SurvivorPrime::Prime(p) => {
                let p =
                    u64::try_from(p).map_err(|_| Error::invalid("survivor exponent too large"))?;
                let cert = endgame_for(config, q, p, &s.label)?;
                attach_endgame(&mut report, &cert)?;
                cert.all_checks_pass()
            }
            SurvivorPrime::AllFrom(_) => false,
        },
        _ => false,
    };
    report
        .as_object_mut()
        .expect("report is an object")
        .insert("overall_proved".into(), Value::Bool(proved));
    Ok(Outcome {
        code: if proved { EXIT_SUCCESS } else { EXIT_SURVIVORS },
        stdout: publish(config, q, &report)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_args(
            std::iter::once("quartic-fermat").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["quartic-fermat", "classify", "17"]).unwrap();
        assert_eq!(cli.config.tset, vec![3, 7, 11, 19]);
        assert_eq!(cli.config.p_min, 14);
        assert!(!cli.config.offline);
    }

    #[test]
    fn classify_commands() {
        let (code, out, _) = run_args(&["--format", "md", "classify", "17"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("BiquadrateSum(1,2)"));
        let (code, out, _) = run_args(&["classify", "41"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"summary\":\"A4B2Form(1,5)\""));
        let (code, _, err) = run_args(&["classify", "15"]);
        assert_eq!(code, 2);
        assert!(err.contains("15"));
        assert_eq!(run_args(&["classify", "x"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn fetch_offline_without_data() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().to_str().unwrap();
        let (code, _, _) = run_args(&[
            "--offline",
            "--no-bundled",
            "--cache-dir",
            cache,
            "fetch",
            "2336",
        ]);
        assert_eq!(code, 4);
        let (code, out, _) = run_args(&["--offline", "--cache-dir", cache, "fetch", "32"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("32.2.a.a"));
    }
}
