use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use diffclass::simulate::Dataset;

const CONSTANT_CONFIG: &str = r#"{
    "model": {
        "b0": {"kind": "constant", "value": 0.0},
        "b1": {"kind": "constant", "value": 1.0},
        "sigma": {"kind": "constant", "value": 1.0},
        "p0": 0.5, "p1": 0.5
    },
    "beta": 1.0,
    "regime": "constant",
    "N_grid": [50, 200],
    "n_rule": "equal_N",
    "replicates": 2,
    "test_size": 300,
    "seed": 3
}"#;

const BUMP_CONFIG: &str = r#"{
    "model": {
        "b0": {"kind": "rational_bump"},
        "b1": {"kind": "gaussian_bump"},
        "sigma": {"kind": "cosine_sigma"},
        "p0": 0.5, "p1": 0.5
    },
    "beta": 1.0,
    "regime": "bounded",
    "N_grid": [60, 120],
    "n_rule": {"fixed": 40},
    "replicates": 2,
    "test_size": 100,
    "seed": 4,
    "K_scale": 60.0,
    "family": {"count": 3, "N": 1000}
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diffclass"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn rate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CONSTANT_CONFIG);
    let out = dir.path().join("out");
    let o = run(&["rate", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("rate.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("seed,N,n,replicate,regime,K_scale,K0,A0,K1,A1"));
    assert_eq!(lines.count(), 4);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("rate.json")).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "rate");
    assert_eq!(summary["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(summary["config"]["seed"], 3);
    assert_eq!(summary["aggregates"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_override_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CONSTANT_CONFIG);
    let mut outputs = Vec::new();
    for (threads, sub) in [("1", "a"), ("3", "b")] {
        let out = dir.path().join(sub);
        let o = run(&[
            "--seed", "99", "--threads", threads, "rate", "--config", &cfg, "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(fs::read_to_string(out.join("rate.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].lines().nth(1).unwrap().starts_with("99,"));
}

#[test]
fn estimation_gram_and_adversarial_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.json", BUMP_CONFIG);
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    for args in [
        vec!["estimation", "--config", &cfg, "--out", out],
        vec!["gram", "--config", &cfg, "--N", "300", "--out", out],
        vec!["adversarial", "--config", &cfg, "--out", out],
    ] {
        let o = run(&args);
        assert!(o.status.success(), "{:?}: {}", args, stderr(&o));
    }
    let gram = fs::read_to_string(Path::new(out).join("gram.csv")).unwrap();
    assert_eq!(gram.lines().count(), 1 + 2 * 2);
    assert!(gram.lines().skip(1).all(|l| l.ends_with(",ok")));
    let adv: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(out).join("adversarial.json")).unwrap())
            .unwrap();
    assert_eq!(adv["aggregates"]["family"]["members"].as_array().unwrap().len(), 3);
    let est = fs::read_to_string(Path::new(out).join("estimation.csv")).unwrap();
    assert!(est.lines().next().unwrap().ends_with("norm_b0,norm_b1,norm_sigma_sq"));
}

#[test]
fn simulate_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.json", BUMP_CONFIG);
    let dump = dir.path().join("paths.txt");
    let o = run(&["simulate", "--config", &cfg, "--dump", dump.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let file = fs::File::open(&dump).unwrap();
    let ds = Dataset::read_text(std::io::BufReader::new(file)).unwrap();
    assert_eq!(ds.len(), 60);
    assert_eq!(ds.n(), 40);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_grid = write_config(
        dir.path(),
        "g.json",
        &CONSTANT_CONFIG.replace("[50, 200]", "[200, 50]"),
    );
    let not_json = write_config(dir.path(), "j.json", "{ nope");
    let wrong_regime = write_config(
        dir.path(),
        "r.json",
        &CONSTANT_CONFIG.replace(r#""regime": "constant""#, r#""regime": "bounded""#),
    );
    let constant = write_config(dir.path(), "c.json", CONSTANT_CONFIG);
    let missing = dir.path().join("absent.json");
    for args in [
        vec!["rate", "--config", bad_grid.as_str()],
        vec!["rate", "--config", not_json.as_str()],
        vec!["rate", "--config", missing.to_str().unwrap()],
        vec!["estimation", "--config", constant.as_str()],
        vec!["gram", "--config", bad_grid.as_str(), "--N", "100"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", args, stderr(&o));
        assert!(stderr(&o).contains("error"));
    }
    // A bounded regime with constant coefficients is a valid configuration.
    let dump = dir.path().join("d.txt");
    let o = run(&["simulate", "--config", &wrong_regime, "--dump", dump.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn numerical_failure_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let explosive = r#"{
        "model": {
            "b0": {"kind": "affine", "slope": 100000.0, "intercept": 1.0},
            "b1": {"kind": "affine", "slope": 100000.0, "intercept": 1.0},
            "sigma": {"kind": "constant", "value": 1.0},
            "p0": 0.5, "p1": 0.5
        },
        "beta": 1.0,
        "regime": "unbounded_drift",
        "N_grid": [10],
        "n_rule": {"fixed": 200},
        "replicates": 1,
        "test_size": 10,
        "seed": 1
    }"#;
    let cfg = write_config(dir.path(), "x.json", explosive);
    let o = run(&["rate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("diverged"));
}
