use std::process::Command;

use canord::cli::run;
use canord::mckay::McKayReport;
use canord::ramdata::ResolutionJson;

fn canord(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["canord"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_a12() {
    let (code, out, _) = canord(&["verify", "--type", "A12", "--e", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("A12(e=2): resolution 4 group 4 agree"), "{out}");
}

#[test]
fn verify_l_notes_skew() {
    let (code, out, _) = canord(&["verify", "--type", "L", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("resolution 2 group 2"));
    assert!(out.contains("note: skew-constructible: false"), "{out}");
}

#[test]
fn parameter_errors_exit_2() {
    assert_eq!(canord(&["verify", "--type", "BD", "--n", "0"]).0, 2);
    assert_eq!(canord(&["verify", "--type", "BL"]).0, 2);
    assert_eq!(canord(&["verify", "--type", "XY", "--n", "1"]).0, 2);
    assert_eq!(canord(&["verify", "--n", "1"]).0, 2);
    assert_eq!(canord(&["table", "--families", ""]).0, 2);
    assert_eq!(canord(&["table", "--n", "4..1"]).0, 2);
    assert_eq!(canord(&["quiver", "--group", "Z9"]).0, 2);
    assert_eq!(canord(&["lattice", "--type", "Anz", "--n", "2", "--e", "1"]).0, 2);
    assert_eq!(canord(&["frobnicate"]).0, 2);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = canord(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn table_json_round_trips() {
    let (code, out, _) = canord(&["table", "--families", "BL,B", "--n", "1..4", "--format", "json"]);
    assert_eq!(code, 0);
    let reports: Vec<McKayReport> = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r.agree));
    let again = serde_json::to_string_pretty(&reports).unwrap() + "\n";
    assert_eq!(again, out);
}

#[test]
fn verify_json_round_trips() {
    for args in [["--type", "Anz", "--n", "2", "--e", "3"], ["--type", "DL", "--n", "3", "--e", "1"]] {
        let mut argv = vec!["verify"];
        argv.extend_from_slice(&args);
        argv.extend_from_slice(&["--format", "json"]);
        let (code, out, _) = canord(&argv);
        assert_eq!(code, 0);
        let r: McKayReport = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
    }
}

#[test]
fn lattice_json_round_trips() {
    let (code, out, _) = canord(&["lattice", "--type", "BDn", "--n", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let r: ResolutionJson = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
}

#[test]
fn table_ade_rows() {
    let (code, out, _) = canord(&["table", "--families", "ADE"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    let names: Vec<&str> = rows.iter().map(|r| r.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "E6", "E7", "E8"]);
    for r in rows {
        let f: Vec<&str> = r.split_whitespace().collect();
        let curves = f.len() - 6;
        assert_eq!(f[1].parse::<usize>().unwrap(), curves + 1, "{r}");
        assert_eq!(f[1], f[2]);
    }
}

#[test]
fn table_output_is_sorted() {
    let (code, out, _) = canord(&["table", "--families", "Anz,BD", "--n", "1..3", "--e", "1..3", "--format", "json"]);
    assert_eq!(code, 0);
    let reports: Vec<McKayReport> = serde_json::from_str(&out).unwrap();
    let types: Vec<String> = reports.iter().map(|r| r.canonical_type().unwrap().to_string()).collect();
    assert_eq!(
        types,
        ["BD(n=2)", "BD(n=3)", "Anz(n=1,e=2)", "Anz(n=1,e=3)", "Anz(n=2,e=2)", "Anz(n=2,e=3)", "Anz(n=3,e=2)", "Anz(n=3,e=3)"]
    );
}

#[test]
fn quiver_a3_is_a_cycle() {
    let (code, out, _) = canord(&["quiver", "--group", "A3", "--dot"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches(" -- ").count(), 4);
    assert_eq!(out.matches("d=1").count(), 4);
}

#[test]
fn quiver_e6_json() {
    let (code, out, _) = canord(&["quiver", "--group", "E6", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], 24);
    assert_eq!(v["affineMatch"], true);
    let mut dims: Vec<u64> = v["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    dims.sort_unstable();
    assert_eq!(dims, [1, 1, 1, 2, 2, 2, 3]);
}

#[test]
fn lattice_l2_marks_ramified_curves() {
    let (code, out, _) = canord(&["lattice", "--type", "L", "--n", "2", "--dot"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("color=red").count(), 2, "{out}");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("canord-{}.dot", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = canord(&["quiver", "--group", "D4", "--dot", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("graph \"D4\""));
}

#[test]
fn binary_exit_codes_and_cap() {
    let bin = env!("CARGO_BIN_EXE_canord");
    let ok = Command::new(bin).args(["verify", "--type", "BL", "--n", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify", "--type", "BD", "--n", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let capped = Command::new(bin).env("CANORD_CAP", "4").args(["verify", "--type", "BL", "--n", "3"]).output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap of 4"));
}
