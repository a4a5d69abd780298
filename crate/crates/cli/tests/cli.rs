use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn scenario(name: &str) -> PathBuf {
    data().join("scenarios").join(name)
}

fn eqloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqloc"))
        .args(args)
        .current_dir(data())
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn verify_json(name: &str) -> (Value, i32) {
    let path = scenario(name);
    let out = eqloc(&["--out", "json", "verify", path.to_str().unwrap()]);
    (json_of(&out), out.status.code().unwrap())
}

#[test]
fn s3_character_degrees() {
    let (report, code) = verify_json("chartab_s3.json");
    assert_eq!(code, 0);
    assert_eq!(report["details"]["degrees"], serde_json::json!([1, 1, 2]));
    assert_eq!(report["checks"][0]["verdict"], "pass");
}

#[test]
fn s3_element_for_rotation_subgroup() {
    let (report, code) = verify_json("segal_s3.json");
    assert_eq!(code, 0);
    let witness = &report["witnesses"][0];
    assert_eq!(witness["formal"], "[triv]−[sign]");
    assert_eq!(witness["trace_at_gamma"], "2");
}

#[test]
fn reflection_circle_localizes() {
    let (report, code) = verify_json("localization_circle.json");
    assert_eq!(code, 0);
    assert_eq!(report["checks"][0]["verdict"], "pass");
    let localized = report["details"]["localized"].as_array().unwrap();
    assert!(localized.iter().all(|d| d["is_iso"] == true));
    assert_eq!(report["details"]["unlocalized_quasi_iso"], false);
}

#[test]
fn all_shipped_scenarios_run() {
    let mut names: Vec<_> = std::fs::read_dir(data().join("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    for path in names {
        let out = eqloc(&["verify", path.to_str().unwrap()]);
        let expected = if path.ends_with("not_regular.json") { 1 } else { 0 };
        assert_eq!(out.status.code(), Some(expected), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn non_regular_complex_is_reported() {
    let (report, code) = verify_json("not_regular.json");
    assert_eq!(code, 1);
    assert_eq!(report["error"]["kind"], "NotRegular");
}

#[test]
fn reports_are_reproducible() {
    let paths: Vec<String> = ["chartab_s3.json", "homology_circle.json", "localization_sphere.json", "theorem1_s3.json"]
        .iter()
        .map(|n| scenario(n).to_str().unwrap().to_string())
        .collect();
    let run = |jobs: &str| {
        let mut args = vec!["--out", "json", "--jobs", jobs, "verify"];
        args.extend(paths.iter().map(String::as_str));
        eqloc(&args).stdout
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
    let reports: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 4);
}

#[test]
fn direct_subcommands() {
    let out = eqloc(&["--out", "json", "segal-element", "--group", "s3.json", "--gamma", "transpositions", "--subgroup", "C3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["witnesses"][0]["formal"], "[triv]−[sign]");

    let out = eqloc(&["--out", "json", "homology", "--group", "Z2", "--complex", "reflection_circle.json", "--coefficients", "repring:R"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["homology"][1]["degrees"][0].as_array().unwrap().len(), 3);

    let out = eqloc(&["orbitcat", "--group", "S3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("G/C3"));

    let out = eqloc(&["--seed", "7", "coarse-check", "--random", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = eqloc(&["coarse-check", "--space", "swap_space.json", "--group", "z2.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    assert_eq!(eqloc(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn subgroup_meeting_the_class_has_no_element() {
    let out = eqloc(&["--out", "json", "segal-element", "--group", "S3", "--gamma", "transpositions", "--subgroup", "C2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert!(report["witnesses"].is_null());
    assert_eq!(report["checks"][0]["verdict"], "pass");
}

#[test]
fn malformed_scenarios_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"task": "chartab", "group": "S3", "colour": 1}"#).unwrap();
    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, r#"{"task": "theorem1", "group": "S3", "complex": "nowhere.json", "family": "all"}"#).unwrap();
    for p in [&unknown, &missing] {
        let out = eqloc(&["--out", "json", "verify", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
        assert!(json_of(&out)["error"].is_object());
    }
}

#[test]
fn ring_and_truncation_flags() {
    let path = scenario("assembly_z2.json");
    let zz = json_of(&eqloc(&["--out", "json", "verify", path.to_str().unwrap()]));
    assert_eq!(zz["homology"][0]["degrees"][1], serde_json::json!(["2"]));
    let qq = json_of(&eqloc(&["--out", "json", "--ring", "qq", "--truncate", "4", "verify", path.to_str().unwrap()]));
    assert_eq!(qq["homology"][0]["degrees"][1], serde_json::json!([]));
    assert_eq!(qq["homology"][0]["degrees"].as_array().unwrap().len(), 4);
}
