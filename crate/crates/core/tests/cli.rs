use std::fs;
use std::io::Cursor;
use std::path::Path;
use std::process::Command;

use rangekit::harness::cli::{run, EXIT_ERROR, EXIT_VIOLATION};
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn rk(args: &[&str]) -> Outcome {
    rk_stdin(args, "")
}

fn rk_stdin(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["rangekit"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--kind", "adversarial-mode", "--n", "60", "--eps", "1", "--bits-seed", "7"];
    let a = rk(&args);
    let b = rk(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let seq = rangekit::harness::parse_sequence(&a.stdout).unwrap();
    assert_eq!(seq.len(), 60);
    assert!(seq.iter().all(|&c| (1..=4).contains(&c)));
    let other = rk(&["gen", "--kind", "adversarial-mode", "--n", "60", "--eps", "1", "--bits-seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn build_and_query_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("seq.txt");
    fs::write(&seq_path, "# sample\n1\n2\n2\n3\n2\n1\n1\n1\n").unwrap();
    let idx = dir.path().join("mode.idx");
    let r = rk(&["build", "--structure", "static-mode", "--input", p(&seq_path), "--eps", "0.5", "--out", p(&idx)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = rk_stdin(&["query", "--index", p(&idx), "--seq", p(&seq_path)], "5 8\n1 3\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert!(lines[0].starts_with("5 8 ") && lines[0].ends_with(" 1"), "{}", lines[0]);
    assert!(lines[1].ends_with(" 2"), "{}", lines[1]);

    let sel = dir.path().join("online.idx");
    let r = rk(&["build", "--structure", "online-select", "--input", p(&seq_path), "--alpha", "0.25", "--out", p(&sel)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let qfile = dir.path().join("q.txt");
    fs::write(&qfile, "1 8 1\n1 8 8\n").unwrap();
    let r = rk(&["query", "--index", p(&sel), "--queries", p(&qfile)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 2);
    let r = rk_stdin(&["query", "--index", p(&sel)], "1 8\n");
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);

    let fixed = dir.path().join("fixed.idx");
    let r = rk(&["build", "--structure", "fixed-select", "--input", p(&seq_path), "--rank-fn", "max", "--out", p(&fixed)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = rk_stdin(&["query", "--index", p(&fixed), "--seq", p(&seq_path)], "1 8\n");
    assert!(r.stdout.trim().ends_with(" 3"), "{}", r.stdout);
}

#[test]
fn malformed_input_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("bad.txt");
    fs::write(&seq_path, "1\n2\nthree\n").unwrap();
    let r = rk(&["build", "--structure", "static-mode", "--input", p(&seq_path), "--out", p(&dir.path().join("x"))]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    let script = dir.path().join("bad.script");
    fs::write(&script, "I 1 1\nQ 1\n").unwrap();
    let r = rk(&["replay", "--script", p(&script)]);
    assert_eq!(r.code, EXIT_ERROR);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    let junk = dir.path().join("junk.idx");
    fs::write(&junk, b"nope").unwrap();
    assert_eq!(rk(&["query", "--index", p(&junk)]).code, EXIT_ERROR);
    assert_eq!(rk(&["frobnicate"]).code, EXIT_ERROR);
}

#[test]
fn verify_static_default_corpus() {
    let r = rk(&["verify", "--structure", "static-mode", "--eps", "0.5", "--nmax", "48"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["violation_count"], 0);
    assert!(v["checks"]["mode_sound"]["checked"].as_u64().unwrap() > 100_000);
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", "--structure", "fixed-select", "--alpha", "0.4,0.1", "--nmax", "24", "--seeds", "3"];
    let a = rk(&args);
    let b = rk(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let r = rk(&["verify", "--structure", "online-select", "--alpha", "0.25", "--nmax", "16", "--seeds", "2"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = rk(&["verify", "--structure", "dynamic-mode", "--eps", "1", "--scripts", "1", "--ops", "800"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn verify_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("s.txt");
    let r = rk(&["gen", "--kind", "zipf", "--n", "40", "--sigma", "5", "--seed", "3", "--out", p(&seq_path)]);
    assert_eq!(r.code, 0);
    let r = rk(&["verify", "--structure", "static-mode", "--eps", "0.25", "--input", p(&seq_path)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["sequences"], 1);
    assert_eq!(v["windows"], 40 * 41 / 2);
}

#[test]
fn space_report() {
    let r = rk(&["space", "--structure", "static-mode", "--eps", "0.5", "--n", "4096"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let total = v["total_bits"].as_u64().unwrap();
    let parts: u64 = ["low", "levels", "quad"]
        .iter()
        .map(|k| {
            let c = &v["components"][k];
            c["payload"].as_u64().unwrap() + c["directory"].as_u64().unwrap()
        })
        .sum();
    assert_eq!(total, parts);
    assert_eq!(r.stdout, rk(&["space", "--structure", "static-mode", "--eps", "0.5", "--n", "4096"]).stdout);
}

#[test]
fn bench_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.json");
    let r = rk(&["bench", "--structure", "static-mode", "--n", "1024,2048", "--eps", "1", "--queries", "100", "--out", p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let script = dir.path().join("ops.txt");
    let r = rk(&["gen", "--kind", "script", "--n", "600", "--sigma", "3", "--out", p(&script)]);
    assert_eq!(r.code, 0);
    let r = rk(&["replay", "--script", p(&script), "--eps", "0.5"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["ops"], 600);
    assert_eq!(v["violation_count"], 0);

    fs::write(&script, "D 1\n").unwrap();
    assert_eq!(rk(&["replay", "--script", p(&script)]).code, EXIT_VIOLATION);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rangekit");
    let ok = Command::new(bin).args(["gen", "--kind", "random", "--n", "5"]).output().unwrap();
    assert!(ok.status.success());
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 5);
    let bad = Command::new(bin).args(["gen", "--kind", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    let threads = Command::new(bin)
        .env("RANGEKIT_THREADS", "1")
        .args(["verify", "--structure", "static-mode", "--nmax", "8", "--seeds", "2"])
        .output()
        .unwrap();
    assert!(threads.status.success());
}
