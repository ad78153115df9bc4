//! End-to-end tests of the `qls` binary: exit codes, report determinism,
//! golden files, and the emitted-double round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn qls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qls"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs from the workspace root so reports contain stable relative paths.
fn qls_at_root(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qls"))
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn verify_cqt_passes_on_e1() {
    let out = qls(&["verify-cqt", "--input", data("e1.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["axioms"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_cqt_h1_mode_agrees() {
    let full = qls(&["verify-cqt", "--input", data("e2_mixed.toml").to_str().unwrap()]);
    let h1 = qls(&[
        "verify-cqt",
        "--mode",
        "h1",
        "--input",
        data("e2_mixed.toml").to_str().unwrap(),
    ]);
    assert_eq!(full.status.code(), h1.status.code());
    assert_eq!(stdout_json(&full)["status"], stdout_json(&h1)["status"]);
}

#[test]
fn equiv_inequivalent_names_invariant() {
    let out = qls(&[
        "equiv",
        "--input",
        data("e2_sym.toml").to_str().unwrap(),
        "--other",
        data("e2_symp.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "inequivalent");
    let reason = v["payload"]["reason"].as_str().unwrap();
    assert!(
        reason.contains("zsym_semisimple") || reason.contains("alternating rank"),
        "reason must name the distinguishing invariant: {reason}"
    );
}

#[test]
fn equiv_across_groups_is_inequivalent() {
    // different groups, even with different scalar contexts
    let out = qls(&[
        "equiv",
        "--input",
        data("z4.toml").to_str().unwrap(),
        "--other",
        data("e1.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "inequivalent");
}

#[test]
fn equiv_symplectic_with_e1_double() {
    let out = qls(&[
        "equiv",
        "--input",
        data("e2_symp.toml").to_str().unwrap(),
        "--other",
        data("e1_double.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "equivalent");
}

#[test]
fn double_requires_self_duality() {
    let out = qls(&["double", "--input", data("z4.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "input-error");
    assert!(v["payload"]["error"]
        .as_str()
        .unwrap()
        .contains("self-duality required"));
}

#[test]
fn missing_file_is_input_error() {
    let out = qls(&["ribbon", "--input", "/nonexistent/x.toml"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_datum_is_input_error() {
    let dir = std::env::temp_dir().join("qls-cli-test-invalid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    let text = std::fs::read_to_string(data("e1.toml")).unwrap();
    std::fs::write(&path, text.replace("chi = [1]", "chi = [0]")).unwrap();
    let out = qls(&["verify-hopf", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert!(v["payload"]["error"].as_str().unwrap().contains("must be -1"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for cmd in [
        vec!["report-all", "--input"],
        vec!["ribbon", "--input"],
        vec!["sym-center", "--input"],
    ] {
        let mut args = cmd.clone();
        let path = data("e2_mixed.toml");
        args.push(path.to_str().unwrap());
        let a = qls(&args);
        let b = qls(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {cmd:?}");
    }
}

#[test]
fn json_flag_writes_report_file() {
    let dir = std::env::temp_dir().join("qls-cli-test-json");
    std::fs::create_dir_all(&dir).unwrap();
    let json_path = dir.join("report.json");
    let out = qls(&[
        "h2inv",
        "--input",
        data("e3.toml").to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&json_path).unwrap();
    // file matches stdout up to the trailing newline
    assert_eq!(&written[..written.len() - 1], &out.stdout[..out.stdout.len() - 1]);
}

#[test]
fn emitted_double_verifies() {
    let dir = std::env::temp_dir().join("qls-cli-test-double");
    std::fs::create_dir_all(&dir).unwrap();
    let emitted = dir.join("e2_double.toml");
    let out = qls(&[
        "double",
        "--input",
        data("e2_sym.toml").to_str().unwrap(),
        "--emit",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let check = qls(&["report-all", "--input", emitted.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(stdout_json(&check)["status"], "pass");
}

#[test]
fn equiv_undecided_at_small_bound() {
    let out = qls(&[
        "equiv",
        "--input",
        data("e1.toml").to_str().unwrap(),
        "--other",
        data("e1.toml").to_str().unwrap(),
        "--bound-group",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "undecided");
}

#[test]
fn autbr_undecided_at_small_bound() {
    let out = qls(&[
        "autbr",
        "--input",
        data("z2z2.toml").to_str().unwrap(),
        "--bound-group",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "undecided");
}

#[test]
fn seed_recorded_in_report() {
    let out = qls(&[
        "normalize",
        "--input",
        data("e1.toml").to_str().unwrap(),
        "--seed",
        "42",
    ]);
    assert_eq!(stdout_json(&out)["seed"], 42);
}

fn check_golden(name: &str, args: &[&str]) {
    let out = qls_at_root(args);
    let actual = String::from_utf8(out.stdout).unwrap();
    let path = golden(name);
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {name} ({e}); run with UPDATE_GOLDEN=1"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn golden_normalize_every_shipped_example() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.ends_with(".toml").then_some(name)
        })
        .collect();
    names.sort();
    assert!(names.len() >= 11, "shipped corpus shrank: {names:?}");
    for name in names {
        let stem = name.trim_end_matches(".toml");
        check_golden(
            &format!("normalize_{stem}.json"),
            &["normalize", "--input", &format!("data/{name}")],
        );
    }
}

#[test]
fn golden_reports() {
    check_golden(
        "verify_cqt_e1.json",
        &["verify-cqt", "--input", "data/e1.toml"],
    );
    check_golden("ribbon_z2z2.json", &["ribbon", "--input", "data/z2z2.toml"]);
    check_golden("h2inv_e3.json", &["h2inv", "--input", "data/e3.toml"]);
    check_golden(
        "normalize_e2_mixed.json",
        &["normalize", "--input", "data/e2_mixed.toml"],
    );
    check_golden("double_e1.json", &["double", "--input", "data/e1.toml"]);
    check_golden(
        "sym_center_e2_symp.json",
        &["sym-center", "--input", "data/e2_symp.toml"],
    );
    check_golden(
        "braid_e2_symp.json",
        &["braid", "--input", "data/e2_symp.toml"],
    );
    check_golden(
        "cocycles_e2_sym.json",
        &["cocycles", "--input", "data/e2_sym.toml"],
    );
    check_golden("autbr_z2z2.json", &["autbr", "--input", "data/z2z2.toml"]);
    check_golden(
        "report_all_e1.json",
        &["report-all", "--input", "data/e1.toml"],
    );
}
