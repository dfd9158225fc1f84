use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const CONFIG: &str = r#"
[synth]
k_true = 3
m = 60
n = 30
doc_len = 25

[preprocess]
min_term_count = 1

[lda]
iterations = 40
burn_in = 20
sample_lag = 10
fold_iters = 20

[ensemble]
ks = [2, 3]
seeds = 5
symbols = 15

[measures]
n_random = 2
"#;

fn geometria(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geometria"))
        .args(args)
        .current_dir(dir)
        .env_remove("GEOMETRIA_STORE")
        .output()
        .unwrap()
}

fn ok_json(out: Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), CONFIG).unwrap();
    dir
}

#[test]
fn structure_twice_reports_cached() {
    let dir = setup();
    let args = ["structure", "--config", "run.toml", "--out", "out"];
    let first = ok_json(geometria(dir.path(), &args));
    assert_eq!(first["status"], "built");
    assert_eq!(first["built"], 10);
    let files: Vec<String> = first["structures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["structure"].as_str().unwrap().to_string())
        .collect();
    let bytes: Vec<Vec<u8>> = files.iter().map(|f| fs::read(f).unwrap()).collect();
    let second = ok_json(geometria(dir.path(), &args));
    assert_eq!(second["status"], "cached");
    assert_eq!(second["cached"], 10);
    for (f, b) in files.iter().zip(&bytes) {
        assert_eq!(&fs::read(f).unwrap(), b);
    }
}

#[test]
fn stability_for_one_k_writes_one_row_per_pair() {
    let dir = setup();
    let v = ok_json(geometria(dir.path(), &["stability", "--config", "run.toml", "--out", "out", "--k", "3"]));
    assert_eq!(v["stability"][0]["pairs"], 10);
    let csv = v["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap())
        .find(|f| f.contains("stability_pairs_"))
        .unwrap();
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "k,label_a,label_b,value");
    assert_eq!(text.lines().count(), 1 + 10);
}

#[test]
fn deltacmp_rows_follow_the_pair_count() {
    let dir = setup();
    let v = ok_json(geometria(
        dir.path(),
        &["deltacmp", "--config", "run.toml", "--out", "out", "--a", "procrustes", "--b", "pearson"],
    ));
    let g = 10;
    assert_eq!(v["pairs"], g * (g - 1) / 2);
    let csv = v["files"][0].as_str().unwrap();
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 1 + 45);
    assert!(v["correlation"].as_f64().unwrap() < 0.0);
}

#[test]
fn report_regenerates_identical_files() {
    let dir = setup();
    ok_json(geometria(dir.path(), &["ksweep", "--config", "run.toml", "--out", "out"]));
    let a = ok_json(geometria(dir.path(), &["report", "--config", "run.toml", "--out", "out"]));
    let files: Vec<String> = a["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap().into()).collect();
    let before: Vec<Vec<u8>> = files.iter().map(|f| fs::read(f).unwrap()).collect();
    let b = ok_json(geometria(dir.path(), &["report", "--config", "run.toml", "--out", "out"]));
    assert_eq!(a, b);
    for (f, bytes) in files.iter().zip(before) {
        assert_eq!(fs::read(f).unwrap(), bytes);
    }
}

#[test]
fn report_without_a_run_fails_cleanly() {
    let dir = setup();
    let out = geometria(dir.path(), &["report", "--config", "run.toml", "--out", "fresh"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "InvalidParameter");
}

#[test]
fn store_root_follows_the_environment() {
    let dir = setup();
    let store = dir.path().join("elsewhere");
    let out = Command::new(env!("CARGO_BIN_EXE_geometria"))
        .args(["structure", "--config", "run.toml", "--out", "out"])
        .current_dir(dir.path())
        .env("GEOMETRIA_STORE", &store)
        .output()
        .unwrap();
    assert!(out.status.success());
    // 10 models, 2 random references, 1 null reference
    assert_eq!(fs::read_dir(store.join("structures")).unwrap().count(), 13);
    assert!(!dir.path().join("out/store").exists());
}

#[test]
fn compare_two_structure_files() {
    let dir = setup();
    let v = ok_json(geometria(dir.path(), &["structure", "--config", "run.toml", "--out", "out"]));
    let a = v["structures"][0]["structure"].as_str().unwrap();
    let b = v["structures"][1]["structure"].as_str().unwrap();
    let same = ok_json(geometria(dir.path(), &["compare", "--a", a, "--b", a]));
    assert_eq!(same["value"], 0.0);
    let diff = ok_json(geometria(dir.path(), &["compare", "--a", a, "--b", b, "--delta", "pearson"]));
    assert_eq!(diff["delta"], "pearson");
    assert!(diff["value"].as_f64().unwrap() <= 1.0);
}

#[test]
fn ingest_writes_a_loadable_matrix() {
    let dir = setup();
    fs::write(dir.path().join("docs.txt"), "apples and pears\npears and plums\nplums again\n").unwrap();
    let v = ok_json(geometria(
        dir.path(),
        &["ingest", "--input", "docs.txt", "--format", "lines", "--config", "run.toml", "--out", "out"],
    ));
    assert_eq!(v["documents"], 3);
    assert!(Path::new(v["dtm"].as_str().unwrap()).is_file());
}

#[test]
fn bad_input_is_reported_as_json() {
    let dir = setup();
    let out = geometria(dir.path(), &["ksweep", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Usage");

    fs::write(dir.path().join("bad.toml"), "[measures]\ndelta = \"cka\"\n").unwrap();
    let out = geometria(dir.path(), &["report", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Config");
    assert_eq!(err["key"], "measures.delta");
}

#[test]
fn every_command_documents_its_flags() {
    let dir = setup();
    for (cmd, flags) in [
        ("ingest", &["--input", "--format", "--config", "--seed", "--out"][..]),
        ("train", &["--config", "--seed", "--out"]),
        ("structure", &["--config", "--seed", "--out"]),
        ("compare", &["--a", "--b", "--delta"]),
        ("stability", &["--k", "--n-random", "--config"]),
        ("ksweep", &["--config"]),
        ("deltacmp", &["--a", "--b", "--config"]),
        ("report", &["--config", "--seed", "--out"]),
    ] {
        let out = geometria(dir.path(), &[cmd, "--help"]);
        assert!(out.status.success());
        let help = String::from_utf8(out.stdout).unwrap();
        for f in flags {
            assert!(help.contains(f), "{cmd} --help lacks {f}");
        }
    }
}

#[test]
fn train_caches_models() {
    let dir = setup();
    let first = ok_json(geometria(dir.path(), &["train", "--config", "run.toml", "--out", "out"]));
    assert!(first["models"].as_array().unwrap().iter().all(|m| m["status"] == "trained"));
    let second = ok_json(geometria(dir.path(), &["train", "--config", "run.toml", "--out", "out"]));
    assert!(second["models"].as_array().unwrap().iter().all(|m| m["status"] == "cached"));
}
