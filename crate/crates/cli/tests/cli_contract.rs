//! The command-line contract: exit codes (0 pass / 1 verification failure /
//! 2 input error), negative controls with corrupted bundles, vacuous
//! annotations for zero functors, config-file handling, and text/JSON
//! report agreement.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn vsharp<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_vsharp"))
        .args(args)
        .output()
        .unwrap()
}

fn build_bundle(slug: &str, dir: &Path) -> PathBuf {
    let bundle = dir.join(format!("{slug}.bundle.json"));
    let out = vsharp([
        "build",
        "--group",
        data_dir().join(format!("groups/{slug}.json")).to_str().unwrap(),
        "--irreps",
        data_dir().join("irreps").join(slug).to_str().unwrap(),
        "--weights",
        data_dir().join(format!("weights/{slug}.json")).to_str().unwrap(),
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "build {slug}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    bundle
}

#[test]
fn missing_input_file_exits_2() {
    let out = vsharp(["verify", "--bundle", "/nonexistent/bundle.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vsharp([
        "analyze",
        "--group",
        "/nonexistent/group.json",
        "--irreps",
        "/nonexistent",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_with_missing_irrep_manifest_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = vsharp([
        "analyze",
        "--group",
        data_dir().join("groups/q8.json").to_str().unwrap(),
        "--irreps",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_with_orthogonal_weight_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("bad-weights.json");
    std::fs::write(
        &weights,
        r#"{"group":"Q8","weights":{"Q8.1b":-1},"provenance":{}}"#,
    )
    .unwrap();
    let out = vsharp([
        "build",
        "--group",
        data_dir().join("groups/q8.json").to_str().unwrap(),
        "--irreps",
        data_dir().join("irreps/q8").to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
        "--bundle",
        dir.path().join("out.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Q8.1b"), "stderr must name the bad label: {stderr}");
}

#[test]
fn corrupted_star_bundle_exits_1_naming_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q8", dir.path());
    // flip one entry of the stored star operator
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    let entry = &mut doc["symplectic"][0]["star"][0][1];
    let old = entry[0].as_f64().unwrap();
    entry[0] = serde_json::json!(old + 0.25);
    std::fs::write(&bundle, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = vsharp(["verify", "--bundle", bundle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "math failure must exit 1");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("star"),
        "stderr must name the violated star invariant: {stderr}"
    );
}

#[test]
fn corrupted_lattice_bundle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q8", dir.path());
    // drop a subgroup: now the stored lattice is incomplete, which is an
    // input problem rather than a numerical one
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
    doc["lattice"].as_array_mut().unwrap().pop();
    doc["spaces"].as_array_mut().unwrap().pop();
    std::fs::write(&bundle, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = vsharp(["verify", "--bundle", bundle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_functor_verifies_clean_with_vacuous_annotations() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("s3", dir.path());
    let out = vsharp([
        "verify",
        "--suite",
        "all",
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[vacuous]"), "vacuous checks must be flagged");
    assert!(stdout.contains("ok"));
}

#[test]
fn non_closed_subgroup_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q8", dir.path());
    let out = vsharp([
        "predict",
        "--bundle",
        bundle.to_str().unwrap(),
        "--subgroup",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("inverse") || stderr.contains("closed"), "{stderr}");
}

#[test]
fn predict_resolves_lattice_ids_and_element_lists() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q8", dir.path());
    let by_id = vsharp([
        "predict",
        "--output",
        "json",
        "--bundle",
        bundle.to_str().unwrap(),
        "--subgroup",
        "S0",
    ]);
    assert_eq!(by_id.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&by_id.stdout).unwrap();
    assert_eq!(doc["dim"], 2);
    assert_eq!(doc["predicted_central_vanishing_order"], 2);

    let by_members = vsharp([
        "predict",
        "--output",
        "json",
        "--bundle",
        bundle.to_str().unwrap(),
        "--subgroup",
        "0",
    ]);
    assert_eq!(by_members.status.code(), Some(0));
    let doc2: serde_json::Value = serde_json::from_slice(&by_members.stdout).unwrap();
    assert_eq!(doc2["id"], doc["id"]);

    let out_of_range = vsharp([
        "predict",
        "--bundle",
        bundle.to_str().unwrap(),
        "--subgroup",
        "S99",
    ]);
    assert_eq!(out_of_range.status.code(), Some(2));
}

#[test]
fn bad_suite_name_and_bad_tolerance_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q8", dir.path());
    let out = vsharp([
        "verify",
        "--suite",
        "everything",
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = vsharp([
        "verify",
        "--tolerance",
        "-1.0",
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_paths_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("q8.bundle.json");
    let config = dir.path().join("run.json");
    let cfg = serde_json::json!({
        "group": data_dir().join("groups/q8.json"),
        "irreps": data_dir().join("irreps/q8"),
        "weights": data_dir().join("weights/q8.json"),
        "bundle": bundle,
        "suite": "all",
    });
    std::fs::write(&config, serde_json::to_string(&cfg).unwrap()).unwrap();

    let out = vsharp(["build", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(bundle.exists());

    let out = vsharp(["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // a flag wins over the config value
    let out = vsharp([
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--suite",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // unknown keys are rejected
    std::fs::write(&config, r#"{"tolerance": 1e-9, "tollerance": 1e-3}"#).unwrap();
    let out = vsharp(["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_and_json_reports_carry_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = build_bundle("q12", dir.path());
    let json_out = vsharp([
        "verify",
        "--output",
        "json",
        "--bundle",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(json_out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);

    let text_out = vsharp(["verify", "--bundle", bundle.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&text_out.stdout).to_string();

    // every residual the JSON reports must appear, identically formatted, in
    // the text rendering
    let mut compared = 0;
    for report in doc["reports"].as_array().unwrap() {
        for check in report["checks"].as_array().unwrap() {
            let formatted = format!("residual {:.3e}", check["residual"].as_f64().unwrap());
            assert!(
                text.contains(&formatted),
                "text output missing {formatted} for {}",
                check["id"]
            );
            compared += 1;
        }
    }
    assert!(compared >= 30);
}

#[test]
fn fetch_reads_the_bundled_fixture_offline() {
    let fixtures = data_dir().join("lmfdb-fixtures");
    let out = vsharp([
        "fetch",
        "test.2.8t5.a",
        "--cache-dir",
        fixtures.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["w"], -1);
    assert_eq!(doc["label"], "test.2.8t5.a");

    let missing = vsharp([
        "fetch",
        "unknown.label",
        "--cache-dir",
        fixtures.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2), "offline miss is an input error");
}

#[test]
fn cache_dir_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_vsharp"))
        .args(["fetch", "test.2.8t5.a", "--output", "json"])
        .env("VSHARP_CACHE_DIR", data_dir().join("lmfdb-fixtures"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["irrep_label"], "Q8.2a");
}
