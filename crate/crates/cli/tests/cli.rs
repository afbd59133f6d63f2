use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhmirror")).args(args).env_remove("BHMIRROR_MAX_GROUP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_elliptic() {
    let out = run(&["analyze", "x0^6+x1^3+x2^2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "bhmirror/1");
    assert_eq!(v["weights"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["degree"], 6);
    assert_eq!(v["calabi_yau"], true);
    assert_eq!(v["aut_order"], 36);
}

#[test]
fn analyze_flags_non_cy() {
    let v = json(&run(&["analyze", "x^5+y^5", "--format", "json"]));
    assert_eq!(v["calabi_yau"], false);
}

#[test]
fn malformed_input_exits_2_with_code() {
    let out = run(&["analyze", "x0^^2+x1^3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["schema"], "bhmirror/1");
    assert_eq!(v["error"]["code"], "SyntaxError");

    let out = run(&["analyze", "x0^^2+x1^3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SyntaxError"));
}

#[test]
fn unknown_case_and_flag_are_input_errors() {
    assert_eq!(run(&["table", "--case", "no-such-case"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--case", "elliptic", "--bogus"]).status.code(), Some(2));
}

#[test]
fn group_cap_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_bhmirror"))
        .args(["analyze", "x0^4+x1^4+x2^4+x3^4", "--format", "json"])
        .env("BHMIRROR_MAX_GROUP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["code"], "GroupTooLarge");
}

#[test]
fn table_json_schema() {
    let out = run(&["table", "--case", "quartic", "--format", "json", "--weights"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "bhmirror/1");
    assert_eq!(v["command"], "table");
    assert_eq!(v["k"], 4);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let cell = &rows[0]["cells"][0];
    assert_eq!(cell["total"], 21);
    let w: Vec<u64> = cell["weights"].as_array().unwrap().iter().map(|x| x["dim"].as_u64().unwrap()).collect();
    assert_eq!(w, vec![7, 7, 7]);
    assert_eq!(rows[1]["total"], 8);
}

#[test]
fn csv_rows_match_nonzero_entries() {
    let csv = run(&["table", "--case", "quartic", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let rows = text.lines().count() - 1;
    let v = json(&run(&["table", "--case", "quartic", "--format", "json", "--weights", "--diamonds"]));
    let entries: usize = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["cells"].as_array().unwrap())
        .map(|c| c["classes"].as_array().unwrap().len())
        .sum();
    assert_eq!(rows, entries);
    let dims: u64 = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(dims, 48);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--case", "quartic", "--format", "json"][..],
        &["table", "--case", "cubic-k3", "--weights", "--diamonds"][..],
        &["k3", "--case", "septic-k3-loop", "--format", "json"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_single_case_and_polynomial() {
    let v = json(&run(&["verify", "--case", "double-quartic-loop", "--format", "json"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["cases"].as_array().unwrap().len(), 1);
    let v = json(&run(&["verify", "x^3*y+y^4", "--format", "json"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["polynomials"].as_array().unwrap().len(), 1);
}

#[test]
fn k3_lattice_verdict() {
    let v = json(&run(&["k3", "--case", "quintic-k3", "--format", "json"]));
    assert_eq!(v["lattice_mirror"], true);
    assert_eq!(v["report"]["lattice"], serde_json::json!([2, 1]));
    let out = run(&["k3", "--case", "elliptic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mirror_reports_dual_groups() {
    let v = json(&run(&["mirror", "x0^4+x1^4+x2^4+x3^4", "--K", "trivial", "--format", "json"]));
    assert_eq!(v["transpose"], "x0^4 + x1^4 + x2^4 + x3^4");
    assert_eq!(v["dual_group"]["order"], 64);
    assert_eq!(v["cyclic"]["mirror_K_js_order"], 256);
    let v = json(&run(&["mirror", "x^2*y+y^3", "--format", "json"]));
    assert_eq!(v["transpose"], "x^2 + x*y^3");
}

#[test]
fn catalog_file() {
    let dir = std::env::temp_dir().join(format!("bhmirror-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cases.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# two cases\nell | x0^6+x1^3+x2^2 | trivial\ndq | x0^2+x1^4+x2^4").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&run(&["verify", "--catalog", p, "--format", "json"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["cases"].as_array().unwrap().len(), 2);
    assert!(v["polynomials"].as_array().unwrap().is_empty());
    let out = run(&["table", "--catalog", p, "--case", "ell"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}
