use std::path::PathBuf;
use std::process::{Command, Output};

fn repo(path: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(path).to_string_lossy().into_owned()
}

fn gdpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdpa")).args(args).env_remove("GDPA_HORIZON").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cbinom_classical() {
    let o = gdpa(&["cbinom", "--family", "classical", "--n", "4", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn pi_check_reports_violation() {
    let o = gdpa(&["pi-check", "--family", "custom", "--values", r#"{"2":2,"3":2}"#, "--ring", "Z", "--up-to", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "violation (2,3)");
    let j = gdpa(&["pi-check", "--family", "custom", "--values", r#"{"2":2,"3":2}"#, "--up-to", "10", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["violation"], serde_json::json!([2, 3]));
}

#[test]
fn hilbert_of_special_module() {
    let o = gdpa(&["hilbert", "--ring", "Z", "--special", "2", "--h", "2", "--horizon", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let pieces: Vec<&str> = out.lines().take(13).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    for (n, p) in pieces.iter().enumerate() {
        assert_eq!(*p, if n % 2 == 0 { "Z/2" } else { "0" }, "degree {n}");
    }
    assert!(out.contains("fit: [Z/2]/(1-t^2)"));
}

#[test]
fn schema_errors_carry_a_pointer() {
    let bad = r#"{"context":{"family":"classical","ring":{"ring":"Z"}},"generators":[0,"x"]}"#;
    let o = gdpa(&["hilbert", "--input", bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error at /generators/1"));
    let o = gdpa(&["pi-check", "--family", "custom", "--values", r#"{"2":[1]}"#]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error at /2"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gdpa(&["cbinom", "--n", "4"]).status.code(), Some(1));
    assert_eq!(gdpa(&["cbinom", "--n", "2", "--m", "4"]).status.code(), Some(1));
    assert_eq!(gdpa(&["recover-pi", "--ring", "Z"]).status.code(), Some(1));
    assert_eq!(gdpa(&["--help"]).status.code(), Some(0));
}

#[test]
fn partial_results_exit_two() {
    let o = gdpa(&["tor", "--ring", "GF(2)", "--special", "0", "--h", "2", "--horizon", "10", "--max-i", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("Tor_2: 2: GF(2)"));
}

#[test]
fn horizon_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_gdpa"))
        .args(["hilbert", "--special", "2", "--h", "2", "--out", "json"])
        .env("GDPA_HORIZON", "6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["horizon"], 6);
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    let args = ["bound-check", "--random", "4", "--seed", "11", "--out", "json"];
    let a = gdpa(&args);
    let b = gdpa(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_gdpa")).args(args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn schemas_are_json_and_samples_run() {
    for entry in std::fs::read_dir(repo("schemas")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            assert!(v.get("$schema").is_some(), "{}", p.display());
        }
    }
    let hil = gdpa(&["hilbert", "--input", &repo("schemas/samples/mixed_z.json"), "--horizon", "6"]);
    assert!(stdout(&hil).contains("Z/18"));
    let syz = gdpa(&["syzygy", "--map", &repo("schemas/samples/cover_map.json"), "--horizon", "12"]);
    assert!(stdout(&syz).contains("kernel generators in degrees [2]"));
    let bc = gdpa(&["bound-check", "--ideal", &repo("schemas/samples/ideal.json")]);
    assert_eq!(bc.status.code(), Some(0));
    let rp = gdpa(&["recover-pi", "--input", &repo("schemas/samples/structure_constants.json")]);
    assert!(stdout(&rp).starts_with("b = [1, 2, 4]"));
}

#[test]
fn demos_succeed() {
    let o = gdpa(&["counterexample", "--p", "2", "--r", "1", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["not_generated_below"], true);
    assert_eq!(gdpa(&["kclass", "--demo-p", "3"]).status.code(), Some(0));
    let a2 = gdpa(&["a2-check", "--ideal", "6"]);
    assert_eq!(stdout(&a2).trim(), "bounded: n = 6 (torsion exponent 6)");
}
