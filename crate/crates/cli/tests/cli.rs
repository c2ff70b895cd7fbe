use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use skewlab_cli::exit;

fn skewlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(args)
        .env_remove(skewlab_cli::OUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{}: {e}", dir.join(name).display()))
}

#[test]
fn writes_three_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("dav");
    let o = skewlab(&[
        "run",
        "davenport",
        "--beta",
        "golden",
        "--limit",
        "1e5",
        "--checkpoints",
        "100,1e4,1e5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&read(&out, "summary.json")).unwrap();
    assert_eq!(summary["experiment"], "davenport");
    assert_eq!(summary["values"]["series"].as_array().unwrap().len(), 3);
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["status"], "ok");
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(manifest["versions"]["skewlab-core"], skewlab_core::VERSION);
    let csv = read(&out, "curves.csv");
    assert!(csv.starts_with("n,re,im,abs\n") && !csv.contains('\r'));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn malformed_config_leaves_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    fs::write(&cfg, "tau = 1\nnot a pair at all = = \nlimit 1000\n").unwrap();
    for args in [
        vec!["run", "main-sum", "--config", cfg.to_str().unwrap()],
        vec!["run", "main-sum", "--tau", "-2"],
        vec!["run", "main-sum", "--colour", "blue"],
        vec!["run", "no-such-experiment"],
        vec!["frobnicate"],
    ] {
        let out = tmp.path().join("out");
        let mut full = args.clone();
        full.extend(["--out", out.to_str().unwrap()]);
        let o = skewlab(&full);
        assert_eq!(code(&o), exit::USAGE, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists(), "{args:?} wrote artifacts");
    }
}

#[test]
fn manifest_reproduces_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    let o = skewlab(&[
        "run",
        "main-sum",
        "--limit",
        "20000",
        "--checkpoints",
        "1e3,2e4",
        "--seed",
        "4",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), exit::OK);
    let manifest = first.join("manifest.json");
    let o = skewlab(&["run", "main-sum", "--manifest", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["summary.json", "curves.csv"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
    // the manifest differs only in wall time and the output path
    let strip = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_str(&read(p, "manifest.json")).unwrap();
        v["wall_time_seconds"] = 0.into();
        v["config"]["out"] = "".into();
        v
    };
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn curves_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let mut curves = Vec::new();
    for threads in ["1", "3", "8"] {
        let out = tmp.path().join(threads);
        let o = skewlab(&[
            "run",
            "main-sum",
            "--limit",
            "300000",
            "--checkpoints",
            "1e3,1e5,3e5",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), exit::OK);
        curves.push(fs::read(out.join("curves.csv")).unwrap());
    }
    assert_eq!(curves[0], curves[1]);
    assert_eq!(curves[0], curves[2]);
}

#[test]
fn zero_cocycle_gives_mertens_curve() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m");
    let o = skewlab(&[
        "run",
        "main-sum",
        "--h",
        "zero",
        "--xi1",
        "0",
        "--xi2",
        "1",
        "--y0",
        "0",
        "--limit",
        "1e5",
        "--checkpoints",
        "10,100,1e3,1e4,1e5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), exit::OK, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&out, "curves.csv");
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (re, im, mert) = (col("re"), col("im"), col("mertens_over_n"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[re] - f[mert]).abs() <= 1e-12 && f[im].abs() <= 1e-12, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 5);
    let summary: serde_json::Value = serde_json::from_str(&read(&out, "summary.json")).unwrap();
    let checks = summary["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "mertens-channel" && c["pass"] == true));
}

#[test]
fn verify_scaled_passes_and_fault_is_caught() {
    let o = skewlab(&["verify", "--limit", "10"]);
    let table = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), exit::OK, "{table}");
    assert!(table.contains("character-algebra") && !table.contains("FAIL"));

    let o = skewlab(&["verify", "--limit", "10", "--inject-fault", "character-table"]);
    assert_eq!(code(&o), exit::INVARIANT);
    assert!(String::from_utf8_lossy(&o.stderr).contains("character-algebra"));
}

#[test]
fn precision_exhaustion_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("p");
    let o = skewlab(&["run", "cfrac", "--alpha", "pi-3", "--precision-bits", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), exit::PRECISION, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
}

#[test]
fn output_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(["run", "sieve", "--limit", "1000", "--checkpoints", "10,1000"])
        .env(skewlab_cli::OUT_DIR_ENV, tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), exit::OK);
    assert!(tmp.path().join("summary.json").exists());
}

#[test]
fn list_names_every_experiment() {
    let o = skewlab(&["list"]);
    let text = String::from_utf8_lossy(&o.stdout);
    for e in skewlab_cli::EXPERIMENTS {
        assert!(text.contains(e), "{e}");
    }
}
