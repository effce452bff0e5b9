use std::process::{Command, Output};

use contfrac_cli::commands::ThetaReport;
use contfrac_cli::run_args;

const BIN: &str = env!("CARGO_BIN_EXE_contfrac");

fn exec(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run contfrac")
}

fn ok(args: &[&str]) -> String {
    let mut full = vec!["contfrac"];
    full.extend_from_slice(args);
    run_args(full).unwrap_or_else(|e| panic!("{args:?}: {}", e.message))
}

/// Rows of a `theta`/`recover` table as `(n, bound)`.
fn table_rows(out: &str) -> Vec<(usize, String)> {
    out.lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let n = it.next()?.parse().ok()?;
            let v = it.next()?.to_string();
            it.next().is_none().then_some((n, v))
        })
        .collect()
}

#[test]
fn expand_pi_digits_and_convergents() {
    let out = ok(&["expand", "fixture:pi-minus-3", "--terms", "13", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let digits: Vec<u64> = v["digits"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    assert_eq!(digits, [7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2]);
    assert_eq!(v["convergents"][8]["p"], "51669");
    assert_eq!(v["convergents"][8]["q"], "364913");
}

#[test]
fn expand_sqrt2() {
    let out = ok(&["expand", "surd:-1,2,1", "--terms", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["digits"], serde_json::json!([2, 2, 2, 2, 2]));
}

#[test]
fn theta_table_for_pi() {
    let rows = table_rows(&ok(&["theta", "fixture:pi-minus-3", "--terms", "10", "--digits", "4"]));
    let bounds: Vec<&str> = rows.iter().map(|(_, v)| v.as_str()).collect();
    assert_eq!(
        bounds,
        ["0.1416", "0.0620", "0.9351", "0.0035", "0.6333", "0.3659", "0.5382", "0.2888", "0.6139", "0.2145"]
    );
}

#[test]
fn theta_json_round_trips_through_recover() {
    let json = ok(&["theta", "fixture:pi-minus-3", "--terms", "10", "--format", "json"]);
    let report: ThetaReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.entries.len(), 10);
    let path = std::env::temp_dir().join(format!("contfrac-theta-{}.json", std::process::id()));
    std::fs::write(&path, &json).unwrap();
    let recovered = ok(&["recover", "--theta-json", path.to_str().unwrap(), "--fwd", "8"]);
    std::fs::remove_file(&path).ok();
    let table = ok(&["theta", "fixture:pi-minus-3", "--terms", "10"]);
    assert_eq!(table_rows(&recovered), table_rows(&table));
    assert!(recovered.contains("15 1 292 1 1 1 2 1"), "{recovered}");
}

#[test]
fn recover_near_golden_pair() {
    let u = "0.447213595499957939281834733746";
    let out = ok(&["recover", "--pair", &format!("{u},{u}"), "--fwd", "10"]);
    assert!(out.contains("1 1 1 1 1 1 1 1 1 1"), "{out}");
}

#[test]
fn recover_json_schema() {
    let u = "0.447213595499957939281834733746";
    let out = ok(&["recover", "--pair", &format!("{u},{u}"), "--fwd", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["pair", "at", "digits", "thetas"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["digits"].as_array().unwrap().len(), 3);
}

#[test]
fn jager_csv_rows() {
    let out = ok(&["jager", "fixture:pi-minus-3", "--terms", "10"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,theta_prev,theta_n,in_gamma");
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.ends_with(",inside")));
}

#[test]
fn verify_examples_pass() {
    for (seed, terms) in [("fixture:pi-minus-3", "12"), ("surd:-1,5,2", "200"), ("surd:-2,7,3", "100")] {
        let out = ok(&["verify", seed, "--terms", terms, "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true), "{seed}: {out}");
    }
    let golden = ok(&["verify", "surd:-1,5,2", "--terms", "200"]);
    assert!(golden.contains("tail min theta: 0.4472"), "{golden}");
}

#[test]
fn verify_seeds_file_keeps_order() {
    let path = std::env::temp_dir().join(format!("contfrac-seeds-{}.txt", std::process::id()));
    std::fs::write(&path, "surd:-2,7,3\n# comment\n\nsurd:-1,2,1\nfixture:pi-minus-3\n").unwrap();
    let out = ok(&["verify", "--seeds-file", path.to_str().unwrap(), "--terms", "8", "--format", "json"]);
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let seeds: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["seed"].as_str().unwrap()).collect();
    assert_eq!(seeds, ["surd:-2,7,3", "surd:-1,2,1", "fixture:pi-minus-3"]);
}

#[test]
fn crosscheck_agrees() {
    let out = exec(&["crosscheck", "surd:-2,7,3", "--terms", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 20);
}

#[test]
fn exit_codes() {
    assert_eq!(exec(&["expand", "surd:-1,2,1", "--terms", "3"]).status.code(), Some(0));
    assert_eq!(exec(&["expand", "surd:0,2,1", "--terms", "5"]).status.code(), Some(3));
    assert_eq!(exec(&["recover", "--pair", "0.6,0.6"]).status.code(), Some(3));
    assert_eq!(exec(&["expand", "pi"]).status.code(), Some(1));
    assert_eq!(exec(&["expand", "fixture:e"]).status.code(), Some(1));
    assert_eq!(exec(&["bogus"]).status.code(), Some(1));
    assert_eq!(exec(&["--help"]).status.code(), Some(0));
    let rounded = exec(&["recover", "--pair", "0.0034,0.6237", "--at", "3", "--fwd", "5"]);
    assert_eq!(rounded.status.code(), Some(2));
}

#[test]
fn partial_expansion_on_request() {
    let seed = "decimal:0.14159265358979323846264338327950288";
    let plain = exec(&["expand", seed, "--terms", "100"]);
    assert_eq!(plain.status.code(), Some(2));
    assert!(plain.stdout.is_empty());
    let partial = exec(&["expand", seed, "--terms", "100", "--allow-partial"]);
    assert_eq!(partial.status.code(), Some(2));
    let text = String::from_utf8(partial.stdout).unwrap();
    assert!(text.contains("292"), "{text}");
    assert!(String::from_utf8_lossy(&partial.stderr).contains("precision exhausted"));
}
