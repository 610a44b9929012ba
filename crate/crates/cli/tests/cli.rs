use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn threshlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threshlab"))
        .args(args)
        .env_remove("THRESHLAB_SEED")
        .env_remove("THRESHLAB_TRIALS")
        .env_remove("THRESHLAB_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn verify_constants_prints_both_parts() {
    let o = threshlab(&["verify", "constants"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("819/4096"), "{out}");
    assert!(out.contains("1/32"), "{out}");
    for row in out.lines().skip(1) {
        assert_eq!(row.split(',').nth(6), Some("true"), "{row}");
    }
}

#[test]
fn pc_of_three_singletons() {
    let o = threshlab(&["pc", "singletons:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!((value - 0.20630).abs() < 1e-5, "{value}");
    assert_eq!(v["method"], "exact");
}

#[test]
fn gen_then_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tri4.txt");
    let o = threshlab(&["gen", "triangles:4", "--out", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("n 6\n"), "{text}");
    assert_eq!(text.lines().count(), 5);

    let o = threshlab(&["qsmall", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["q_of"].as_f64().unwrap() - 0.5).abs() < 1e-8);

    let o = threshlab(&["spread", path_str(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["kappa"].as_f64().unwrap() - 4f64.powf(1.0 / 3.0)).abs() < 1e-9);
}

#[test]
fn run_main_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["json", "csv"] {
        let a = dir.path().join(format!("a.{ext}"));
        let b = dir.path().join(format!("b.{ext}"));
        for out in [&a, &b] {
            let o = threshlab(&["run-main", "triangles:5", "--eps", "0.25", "--seed", "11", "--out", path_str(out)]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        }
        let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert!(!ta.is_empty());
        assert_eq!(ta, tb);
    }
    let config = fs::read_to_string(dir.path().join("a.json.config.json")).unwrap();
    assert!(config.contains("\"seed\": 11"), "{config}");
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_threshlab"));
        cmd.args(args).env_remove("THRESHLAB_SEED");
        if let Some(seed) = env {
            cmd.env("THRESHLAB_SEED", seed);
        }
        cmd.output().unwrap()
    };
    let args = ["run-pp", "matchings:6", "--q", "0.05"];
    let from_env = run(Some("5"), &args);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    let from_flag = run(None, &with_flag);
    let default = run(None, &args);
    assert_eq!(from_env.stdout, from_flag.stdout);
    assert_ne!(from_env.stdout, default.stdout);
}

#[test]
fn batch_summary() {
    let o = threshlab(&["run-restart", "triangles:5", "--eps", "0.25", "--trials", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trials"], 500);
    assert!(v["found"].as_u64().unwrap() <= 500);
}

#[test]
fn verify_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kkpp.csv");
    let o = threshlab(&["verify", "kkpp", "singletons:6", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance,check,lhs,relation,rhs"));
    assert_eq!(lines.count(), 2);

    let out = dir.path().join("prop21.json");
    let o = threshlab(&[
        "verify", "prop21", "triangles:5", "--q", "0.05", "--trials", "500", "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn certificates_checked() {
    let dir = tempfile::tempdir().unwrap();
    let o = threshlab(&["qsmall", "triangles:4", "--q", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cert = &v["certificate"];
    let good = dir.path().join("good.json");
    fs::write(&good, cert.to_string()).unwrap();
    let o = threshlab(&["check-cert", "triangles:4", path_str(&good)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let mut forged = cert.clone();
    forged["q"] = serde_json::json!(0.9);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, forged.to_string()).unwrap();
    let o = threshlab(&["check-cert", "triangles:4", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(threshlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(threshlab(&["pc", "not-a-family"]).status.code(), Some(2));
    assert_eq!(threshlab(&["gen", "hamilton:9"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.txt");
    fs::write(&file, "n 3\n0 1\n0 x\n").unwrap();
    let o = threshlab(&["spread", path_str(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn resource_errors_exit_2() {
    let o = threshlab(&["qsmall", "hamilton:7", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn suite_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("suite");
    let o = threshlab(&[
        "suite", "--trials", "200", "--mc-trials", "2000", "--thread-counts", "2,1", "--out", path_str(&out),
    ]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 12, "{lines:?}");
    assert!(lines[0].contains("criterion  1 PASS"));
    assert!(lines[11].contains("criterion 12 PASS"), "{}", lines[11]);
    for name in ["summary.csv", "records.csv", "suite.json"] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 13);
}
