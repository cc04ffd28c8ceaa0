use std::fs;
use std::path::Path;

use quartic_fermat::cli::run_with_args;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let cache = dir.join("cache");
    let reports = dir.join("reports");
    let mut argv = vec![
        "quartic-fermat".to_string(),
        "--offline".into(),
        "--cache-dir".into(),
        cache.display().to_string(),
        "--report-dir".into(),
        reports.display().to_string(),
    ];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_args(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn report(dir: &Path, q: u64) -> Value {
    let text = fs::read_to_string(dir.join(format!("reports/sieve_{q}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["--format", "md", "classify", "17"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("BiquadrateSum(1,2)\n"));
    let r = run(dir.path(), &["classify", "41"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("A4B2Form(1,5)"));
    let r = run(dir.path(), &["classify", "15"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("15"));
}

#[test]
fn sieve_exit_codes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["sieve", "89"]).code, 0);
    assert_eq!(run(dir.path(), &["sieve", "113"]).code, 0);
    assert_eq!(report(dir.path(), 89)["proved"], true);
    let r = run(dir.path(), &["sieve", "73"]);
    assert_eq!(r.code, 1);
    let rep = report(dir.path(), 73);
    let keys: Vec<&str> = rep
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    assert_eq!(
        keys,
        [
            "q",
            "tset",
            "p_min",
            "forms",
            "global_survivors",
            "proved",
            "assumptions"
        ]
    );
    assert_eq!(
        rep["global_survivors"],
        serde_json::json!([{"label": "2336.2.a.l", "p": 17}])
    );
    let r = run(dir.path(), &["sieve", "41"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("(2*1)^4 + 5^2"));
}

#[test]
fn sieve_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports/sieve_73.json");
    run(dir.path(), &["sieve", "73"]);
    let first = fs::read(&path).unwrap();
    run(dir.path(), &["sieve", "73"]);
    assert_eq!(first, fs::read(&path).unwrap());
}

#[test]
fn endgame_examples() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["endgame", "73", "17", "2336.2.a.l"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let cert: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(cert["congruence"]["holds"], true);
    let rep = report(dir.path(), 73);
    assert_eq!(rep["endgame"]["zero_pattern"], true);
    assert_eq!(rep["endgame"]["congruence"]["bound"], 592);
    assert_eq!(
        run(dir.path(), &["endgame", "73", "19", "2336.2.a.l"]).code,
        2
    );
    assert_eq!(run(dir.path(), &["endgame", "89", "17", "x"]).code, 2);
}

#[test]
fn fetch_examples() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["fetch", "2336"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 12);
    assert!(dir.path().join("cache/level_2336.json").exists());
    assert_eq!(run(dir.path(), &["fetch", "32"]).code, 0);
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(
        run(empty.path(), &["--no-bundled", "fetch", "2336"]).code,
        4
    );
}

#[test]
fn prove_chains_the_endgame() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["--format", "md", "prove", "73"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("proved including the endgame: true"));
    assert!(dir.path().join("reports/sieve_73.md").exists());
    assert_eq!(report(dir.path(), 73)["overall_proved"], true);
    assert_eq!(run(dir.path(), &["prove", "17"]).code, 3);
}

#[test]
fn custom_tset() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["--tset", "3,7", "sieve", "89"]);
    assert!(r.code == 0 || r.code == 1);
    assert_eq!(report(dir.path(), 89)["tset"], serde_json::json!([3, 7]));
    assert_eq!(run(dir.path(), &["--tset", "5", "sieve", "89"]).code, 2);
}
