use std::path::Path;
use std::process::Command;

use cli_report::*;
use serde_json::Value;

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let out = dir.join("out");
    let text = format!("{body}\n[output]\ndir = {:?}\n", out.display().to_string());
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn bin(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_fock-verify")).args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn normal_ordering_passes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "no.toml", "suite = \"normal-ordering\"\nn_particles = 3\nladder = [4]");
    let outcome = verify(&RunOptions::new(&cfg)).unwrap();
    assert_eq!(outcome.exit_code(), EXIT_PASS);
    assert!(outcome.report.checks.iter().all(|c| c.pass && c.residual <= 1e-12));
    assert_eq!(bin(&["verify", "--config", cfg.to_str().unwrap()]), EXIT_PASS);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for (i, body) in ["suite = \"cms\"\nlength = -1.0", "suite = \"unknown\"", "suite = [", "suite = \"jastrow\"\nfoo = 1"]
        .iter()
        .enumerate()
    {
        let cfg = write_config(dir.path(), &format!("bad{i}.toml"), body);
        assert_eq!(bin(&["verify", "--config", cfg.to_str().unwrap()]), EXIT_CONFIG, "{body}");
    }
    assert_eq!(bin(&["verify", "--config", "/nonexistent/config.toml"]), EXIT_CONFIG);
    let cfg = write_config(dir.path(), "short.toml", "suite = \"delta-gas\"");
    assert_eq!(bin(&["converge", "--config", cfg.to_str().unwrap()]), EXIT_CONFIG);
}

#[test]
fn capacity_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "cap.toml", "suite = \"delta-gas\"\nn_particles = 6\nladder = [64]");
    assert_eq!(bin(&["spectrum", "--config", cfg.to_str().unwrap()]), EXIT_CAPACITY);
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "j.toml", "suite = \"jastrow\"\n[params]\nsamples = 10");
    assert_eq!(bin(&["verify", "--config", cfg.to_str().unwrap()]), EXIT_FAIL);
}

#[test]
fn list_suites_prints_registry() {
    let out = Command::new(env!("CARGO_BIN_EXE_fock-verify")).arg("--list-suites").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for s in SUITES {
        assert!(text.contains(s.name));
    }
    assert_eq!(SUITES.len(), 10);
}

#[test]
fn converge_writes_order_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ca.toml", "suite = \"current-algebra\"\nladder = [16, 32, 64]");
    let outcome = converge(&RunOptions::new(&cfg)).unwrap();
    let jj = outcome.csv_files.iter().find(|p| p.ends_with("current-algebra-jj.csv")).unwrap();
    let text = std::fs::read_to_string(jj).unwrap();
    let last = text.lines().last().unwrap();
    let order: f64 = last.strip_prefix("fitted_order,").unwrap().trim_end_matches(',').parse().unwrap();
    assert!((order - 2.0).abs() < 0.3, "{order}");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn delta_gas_residual_column_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "dg.toml", "suite = \"delta-gas\"\nladder = [16, 32, 64]");
    let outcome = converge(&RunOptions::new(&cfg)).unwrap();
    let path = outcome.csv_files.iter().find(|p| p.ends_with("delta-gas-equivalence.csv")).unwrap();
    let residuals: Vec<f64> = std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("fitted_order"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(residuals.len(), 3);
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
}

#[test]
fn spectrum_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "osc.toml", "suite = \"oscillatory\"\nladder = [128]\nlength = 20.0");
    let outcome = spectrum(&RunOptions::new(&cfg)).unwrap();
    let csv = std::fs::read_to_string(&outcome.csv_files[0]).unwrap();
    let lowest: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((lowest - 0.5).abs() < 1e-2);

    let cfg = write_config(dir.path(), "free.toml", "suite = \"delta-gas\"\nladder = [12]\n[params]\nbeta = 0.0\neigenvalues = 12");
    let outcome = spectrum(&RunOptions::new(&cfg)).unwrap();
    assert!(outcome.report.checks.iter().any(|c| c.name == "free-spectrum" && c.pass));
    assert!(outcome.report.passed);
}

fn strip_volatile(v: &mut Value) {
    v["generated_unix_s"] = Value::Null;
    for c in v["checks"].as_array_mut().unwrap() {
        c["wall_time_s"] = Value::Null;
    }
}

#[test]
fn reports_are_reproducible_and_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "pf.toml", "suite = \"poisson-functional\"\nseed = 42\n[params]\nsamples = 5000");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let code = bin(&["sample", "--config", cfg.to_str().unwrap(), "--out", p.to_str().unwrap()]);
        assert!(code == EXIT_PASS || code == EXIT_FAIL);
    }
    let mut va: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mut vb: Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    strip_volatile(&mut va);
    strip_volatile(&mut vb);
    assert_eq!(va, vb);

    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    let keys: Vec<&String> = va.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), required.len());
    for r in required {
        assert!(va.get(r).is_some(), "{r}");
    }
    let record_required = schema["properties"]["checks"]["items"]["required"].as_array().unwrap();
    for c in va["checks"].as_array().unwrap() {
        assert_eq!(c.as_object().unwrap().len(), record_required.len());
    }

    let parsed: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(parsed.schema_version, SCHEMA_VERSION);
    assert!(parsed.checks.iter().all(|c| c.consistent() && !c.anchor.is_empty()));

    let other = dir.path().join("c.json");
    bin(&["sample", "--config", cfg.to_str().unwrap(), "--out", other.to_str().unwrap(), "--seed", "43"]);
    let mut vc: Value = serde_json::from_str(&std::fs::read_to_string(&other).unwrap()).unwrap();
    strip_volatile(&mut vc);
    assert_ne!(va["checks"], vc["checks"]);
}
