use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sqfree_cli::Report;
use sqfree_core::construct::{REFEREE15, TURAN15};
use sqfree_core::text::{format_poly, parse_int};

fn sqfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(args)
        .env_remove("SQFREE_JOBS")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Report) {
    let out = sqfree(args);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let rep: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (code, rep)
}

fn canonical(s: &str) -> String {
    format_poly(&parse_int(s).unwrap())
}

#[test]
fn check_cube() {
    let (code, rep) = report(&["squarefree", "check", "--poly", "x^3"]);
    assert_eq!(code, 1);
    assert_eq!(rep.result["squarefree"], false);
    assert_eq!(rep.result["witness"], "x^2");
    assert_eq!(rep.result["witness_root"], "x");
    assert_eq!(rep.certificates.len(), 1);
    let (code, _) = report(&["squarefree", "check", "--poly", "x^2 - 2"]);
    assert_eq!(code, 0);
    let (code, rep) = report(&["squarefree", "check", "--poly", "0x15", "--mod", "2"]);
    assert_eq!(code, 1, "x^4 + x^2 + 1 is a square over F2");
    assert_eq!(rep.result["ring"], "F2");
    let (code, _) = report(&["squarefree", "check", "--poly", "x^5 - x", "--mod", "5"]);
    assert_eq!(code, 0);
}

#[test]
fn construct_turan15_exact() {
    let (code, rep) = report(&["construct", "turan15"]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["f"], canonical(TURAN15));
    assert_eq!(rep.result["h"], "20736*x^10 - 11520*x^8 + 1888*x^6 - 80*x^4 + x^2");
    let cosets: Vec<&str> = rep.result["cosets"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(cosets, ["61/64", "63/64", "9/16", "11/16", "1/4", "3/4"]);
    assert!(rep.certificates.iter().all(|c| c.recheck().unwrap()));
    let blockers = rep.result["blockers"].as_array().unwrap();
    assert!(!blockers.is_empty());
    assert!(blockers.iter().all(|b| b["perturbation"].is_string() && b["witness"].is_string()));
    for args in [&["construct", "referee15"][..], &["construct", "turan15", "--referee"][..]] {
        let (code, rep) = report(args);
        assert_eq!(code, 0);
        assert_eq!(rep.result["f"], canonical(REFEREE15));
    }
}

#[test]
fn family_members_are_hard() {
    for (d, k, base) in [("16", "1", "turan15"), ("19", "-2", "turan15"), ("17", "3", "referee15")] {
        let (code, rep) = report(&["construct", "family", "--d", d, "--k", k, "--base", base]);
        assert_eq!(code, 0, "{d} {k} {base}");
        assert!(!rep.certificates.is_empty());
    }
    assert_eq!(sqfree(&["construct", "family", "--d", "16", "--k", "0"]).status.code(), Some(2));
    let (code, short) = report(&["construct", "turan15", "--k", "-2", "--degree", "19"]);
    assert_eq!(code, 0);
    let (_, long) = report(&["construct", "family", "--d", "19", "--k", "-2"]);
    assert_eq!(short.result["f"], long.result["f"]);
    assert_eq!(sqfree(&["construct", "turan15", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn census_rows_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("phi.csv");
    let (code, rep) = report(&["census", "phi", "--max", "10000", "--threshold", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["count"], 37);
    assert_eq!(rep.result["max_r"], 288);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 38);
    assert!(text.starts_with("r,phi_count,ratio\n2,5,5/2\n"));
    let (_, rep) = report(&["census", "phi", "--min", "1", "--max", "100"]);
    assert_eq!(rep.result["rows"][0]["r"], 1);
}

#[test]
fn usage_errors_exit_2() {
    let bad = [
        vec!["squarefree", "check", "--poly", "x^^2"],
        vec!["squarefree", "check", "--poly", "x", "--mod", "9"],
        vec!["squarefree", "check", "--poly", "0"],
        vec!["search", "--poly", "x^3", "--budget", "3"],
        vec!["search", "--poly", "x", "--quiet", "--output", "a.json"],
        vec!["verify", "lemma52", "--max-degree", "37"],
        vec!["--jobs", "0", "census", "phi", "--max", "10"],
        vec!["tail", "--poly", "x^2 + x", "--n", "3"],
        vec!["nonsense"],
    ];
    for args in bad {
        let out = sqfree(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = sqfree(&["squarefree", "check", "--poly", "x^2 + + 1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
}

#[test]
fn search_refutation_carries_certificates() {
    let (code, rep) = report(&["search", "--poly", TURAN15, "--budget", "1"]);
    assert_eq!(code, 1);
    assert!(rep.result["found"].is_null());
    assert_eq!(rep.certificates.len() as u64, rep.result["neighbors_tested"].as_u64().unwrap());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let out = sqfree(&["search", "--poly", TURAN15, "--budget", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let (code, rep) = report(&["recheck", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["failed"].as_array().unwrap().len(), 0);
    let (code, rep) = report(&["search", "--poly", "x^3"]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["found"]["g"], "x^3 + 1");
}

#[test]
fn recheck_rejects_forgery() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forged.json");
    std::fs::write(&path, r#"{"kind":"square_divisor","ring":"Z","poly":"x^2 - 2","witness":"x"}"#).unwrap();
    let (code, rep) = report(&["recheck", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(rep.result["failed"][0], 0);
}

#[test]
fn quiet_prints_nothing() {
    let out = sqfree(&["-q", "squarefree", "check", "--poly", "x^3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn tail_modes() {
    let (code, rep) = report(&["tail", "--poly", "x^2 + x", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["g"], "x^4 + x^2 + x");
    assert_eq!(rep.result["verified"], true);
    let (code, rep) = report(&["tail", "--poly", "x^4"]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["g"], "x^4 + x + 1");
    let (code, rep) = report(&["tail", "--poly", "x^3", "--window"]);
    assert_eq!(code, 0);
    assert_eq!(rep.result["outcome"]["g"], "x^3 + 2");
}

fn payload(args: &[&str], jobs: &str) -> Value {
    let mut full = vec!["--jobs", jobs];
    full.extend_from_slice(args);
    report(&full).1.result
}

#[test]
fn deterministic_across_worker_counts() {
    for args in [
        &["verify", "lemma52", "--max-degree", "14", "--shard-bits", "5"][..],
        &["verify", "theorem61", "--p", "3", "--d", "15"][..],
        &["scan", "question62", "--p", "2", "--d", "9"][..],
    ] {
        assert_eq!(payload(args, "1"), payload(args, "4"), "{args:?}");
    }
}

#[test]
fn report_round_trips() {
    let out = sqfree(&["verify", "theorem61", "--p", "2", "--d", "9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rep: Report = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&rep).unwrap();
    assert_eq!(serde_json::from_str::<Report>(&again).unwrap(), rep);
    assert_eq!(again.trim_end(), text.trim_end());
}

fn lemma52_with(path: &Path) -> (i32, Report) {
    report(&[
        "verify",
        "lemma52",
        "--max-degree",
        "12",
        "--shard-bits",
        "4",
        "--checkpoint",
        path.to_str().unwrap(),
    ])
}

#[test]
fn checkpoint_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.txt");
    let (code, first) = lemma52_with(&path);
    assert_eq!(code, 0);
    let total = first.result["shards_total"].as_u64().unwrap();
    assert_eq!(first.result["shards_run"].as_u64().unwrap(), total);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# lemma52 max_degree=12"));
    assert_eq!(text.lines().count() as u64, total + 1);

    let (code, second) = lemma52_with(&path);
    assert_eq!(code, 0);
    assert_eq!(second.result["shards_run"], 0);
    assert_eq!(second.result["shards_skipped"].as_u64().unwrap(), total);

    // drop the last ten shard lines: exactly those run again
    let kept: Vec<&str> = text.lines().take(text.lines().count() - 10).collect();
    std::fs::write(&path, kept.join("\n") + "\n").unwrap();
    let (_, third) = lemma52_with(&path);
    assert_eq!(third.result["shards_run"], 10);

    std::fs::write(&path, format!("{}\n0,done,0\n", std::fs::read_to_string(&path).unwrap().trim_end())).unwrap();
    let out = sqfree(&["verify", "lemma52", "--max-degree", "12", "--shard-bits", "4", "--checkpoint", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn checkpoint_rejects_other_runs_and_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("other.txt");
    std::fs::write(&other, "# lemma52 max_degree=10 corollary=false shard_bits=4\n").unwrap();
    let out = sqfree(&["verify", "lemma52", "--max-degree", "12", "--shard-bits", "4", "--checkpoint", other.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let garbage = dir.path().join("garbage.txt");
    std::fs::write(&garbage, "# lemma52 max_degree=12 corollary=false shard_bits=4\n0,done,0\nnot a line\n").unwrap();
    let out = sqfree(&["verify", "lemma52", "--max-degree", "12", "--shard-bits", "4", "--checkpoint", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = sqfree(&["verify", "lemma52", "--max-degree", "12", "--shard-bits", "4", "--checkpoint", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}
