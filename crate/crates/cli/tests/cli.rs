use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn multcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multcong"))
        .args(args)
        .env_remove("MULTCONG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn certify_sigma1_mod_4() {
    let out =
        multcong(&["certify", "--fn", "sigma", "--k-param", "1", "--p", "2", "--pow", "2", "--A", "4", "--B", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["scan_v"]["value"], 2);
    assert_ne!(v["report"]["status"]["status"], "refuted");
}

#[test]
fn certify_sigma0_is_refuted() {
    let out =
        multcong(&["certify", "--fn", "sigma", "--k-param", "0", "--p", "2", "--pow", "2", "--A", "4", "--B", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["report"]["status"]["status"], "refuted");
    assert_eq!(v["report"]["status"]["witness"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(multcong(&["certify", "--fn", "sigma", "--p", "2"]).status.code(), Some(2));
    assert_eq!(multcong(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        multcong(&["certify", "--fn", "sigma", "--k-param", "1", "--p", "4", "--pow", "1", "--A", "4", "--B", "3"])
            .status
            .code(),
        Some(2)
    );
    let out = multcong(&["tau-verify", "--N", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tau_verify_passes() {
    let out = multcong(&["tau-verify", "--N", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["congruences"]["rows"].as_array().unwrap().len(), 12);
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau(7n+3)"));
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "fn = \"sigma\"\nk_param = 1\np = 2\npow = 2\nA = 4\nB = 3\nn_horizon = 1000\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&multcong(&["certify", "--config", cfg]));
    assert_eq!(v["report"]["config"]["n_horizon"], 1000);
    let v = json(&multcong(&["certify", "--config", cfg, "--n-horizon", "10000"]));
    assert_eq!(v["report"]["config"]["n_horizon"], 10000);
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "p = 2\nhorizonn = 3\n").unwrap();
    let out = multcong(&["certify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("horizonn") && err.contains("line 2"), "{err}");
    let out = multcong(&["certify", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn search_csv_is_stable_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let eight = dir.path().join("eight.csv");
    let base = [
        "search",
        "--fn",
        "sigma",
        "--k-param",
        "0",
        "--p",
        "2",
        "--pow",
        "1",
        "--A-max",
        "16",
        "--n-horizon",
        "5000",
        "--format",
        "csv",
    ];
    for (path, threads) in [(&one, "1"), (&eight, "8")] {
        let mut args = base.to_vec();
        args.extend(["--threads", threads, "--out", path.to_str().unwrap()]);
        assert_eq!(multcong(&args).status.code(), Some(0));
    }
    let body = read(&one);
    assert_eq!(body, read(&eight));
    assert!(body.starts_with("A,B,p,k,scan,rhs,certainty,status\n"));
    assert!(body.contains("\n9,3,2,1,"));
    let meta: Value = serde_json::from_str(&read(&dir.path().join("one.csv.meta.json"))).unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["command"], "search");
}

#[test]
fn empty_search_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let code = multcong(&[
        "search",
        "--fn",
        "sigma",
        "--k-param",
        "0",
        "--p",
        "3",
        "--pow",
        "1",
        "--A-max",
        "3",
        "--n-horizon",
        "1000",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .code();
    assert_eq!(code, Some(0));
    assert_eq!(read(&out), "A,B,p,k,scan,rhs,certainty,status\n");
}

#[test]
fn json_body_is_byte_identical_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out =
            multcong(&["conjecture", "phi", "--A-max", "12", "--n-horizon", "2000", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(read(&a), read(&b));
}

#[test]
fn tau_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_multcong"))
            .args(["eval", "--fn", "tau", "--n", "97"])
            .env("MULTCONG_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let cache = dir.path().join("tau-table.txt");
    assert!(read(&cache).starts_with("# multcong tau table v1\n"));
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&second)["report"]["value"], "75013568546");
}

#[test]
fn custom_function_document() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("f.txt");
    std::fs::write(&doc, "family = sigma\nk = 1\n").unwrap();
    let out = multcong(&["eval", "--custom", doc.to_str().unwrap(), "--n", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["report"]["value"], "28");
}
