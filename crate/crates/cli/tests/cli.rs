//! End-to-end tests of the mhd2d binary: exit codes, artifact formats, and
//! byte-for-byte reproducibility. Configurations are kept small (n = 32,
//! short horizons) so the whole file runs in seconds.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mhd2d"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_ops_passes() {
    let out = bin().arg("verify-ops").output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("all checks pass"));
}

#[test]
fn equilibrium_run_writes_artifacts_with_zero_drifts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "eq.toml",
        "n = 32\n[integrator]\nt_end = 0.5\n[initial]\npreset = \"equilibrium\"\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["run", "--config", &cfg, "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));

    let csv = fs::read_to_string(outdir.join("diagnostics.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("time,mass,momentum_x,momentum_y,total_energy,magnetic_mass"));
    // every drift-sensitive column stays at its initial value exactly
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 16);
        assert!((cols[1] - 1.0).abs() <= 1e-12, "mass drifted: {line}");
        assert!(cols[2].abs() <= 1e-12 && cols[3].abs() <= 1e-12);
        assert!((cols[4] - 1.0).abs() <= 1e-12, "energy drifted: {line}");
        assert!(cols[5].abs() <= 1e-12);
    }

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "completed");
    assert_eq!(summary["mass"], 1.0);
    assert_eq!(summary["e0"], 1.0);

    // snapshot: header line + n*n little-endian f64
    let snap = fs::read(outdir.join("snapshots/0000_a.bin")).unwrap();
    let newline = snap.iter().position(|&b| b == b'\n').unwrap();
    let header = String::from_utf8_lossy(&snap[..newline]).into_owned();
    assert!(header.starts_with("n=32 field=a t="), "header: {header}");
    assert_eq!(snap.len() - newline - 1, 32 * 32 * 8);
    let first = f64::from_le_bytes(snap[newline + 1..newline + 9].try_into().unwrap());
    assert_eq!(first, 0.0);
}

#[test]
fn runs_are_reproducible_byte_for_byte() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "r.toml",
        "n = 32\n[integrator]\nt_end = 0.2\n[initial]\neps = 1e-2\nseed = 9\n",
    );
    let run = |dir: &Path| {
        let out = bin()
            .args(["run", "--config", &cfg, "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
    };
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run(&a);
    run(&b);
    assert_eq!(
        fs::read(a.join("diagnostics.csv")).unwrap(),
        fs::read(b.join("diagnostics.csv")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("summary.json")).unwrap(),
        fs::read(b.join("summary.json")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("snapshots/0001_u1.bin")).unwrap(),
        fs::read(b.join("snapshots/0001_u1.bin")).unwrap()
    );
}

#[test]
fn transported_blob_run_completes() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "b.toml",
        "n = 32\n[integrator]\nt_end = 0.2\n[initial]\neps = 1e-2\nseed = 4\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["run", "--config", &cfg, "--preset", "transported-blob", "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["status"], "completed");
    // the blob seeds m proportional to rho, so |m|_H3 is small but nonzero
    let h3_m = summary["final"]["h3_m"].as_f64().unwrap();
    assert!(h3_m > 0.0 && h3_m < 1e-2, "h3_m = {h3_m}");
}

#[test]
fn bad_config_exits_2_and_names_the_key() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "[initial]\nepsilon = 0.1\n");
    let out = bin().args(["run", "--config", &cfg]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("epsilon"), "{}", stderr(&out));

    let cfg2 = write_config(tmp.path(), "bad2.toml", "[initial]\neps = -0.5\n");
    let out = bin().args(["run", "--config", &cfg2]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("initial.eps"), "{}", stderr(&out));
}

#[test]
fn unknown_preset_exits_2() {
    let out = bin().args(["run", "--preset", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nonsense"));
}

#[test]
fn bad_thread_env_exits_2() {
    let out = bin()
        .arg("verify-ops")
        .env("MHD2D_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("MHD2D_THREADS"));
}

#[test]
fn cross_check_small_case_passes() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cc.toml",
        "n = 32\n[integrator]\nt_end = 0.25\n[initial]\neps = 1e-2\nseed = 3\n",
    );
    let out = bin().args(["cross-check", "--config", &cfg]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("within tolerance"));
}

#[test]
fn verify_lemmas_writes_table() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "lem.toml",
        "n = 32\n[lemmas]\nsamples = 10\nbase_seed = 11\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["verify-lemmas", "--config", &cfg, "--out"])
        .arg(&outdir)
        .env("MHD2D_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(outdir.join("lemmas.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "lemma,samples,max_ratio,mean_ratio");
    assert_eq!(lines.len(), 8); // header + seven lemma rows
    for row in &lines[1..] {
        let max_ratio: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(max_ratio.is_finite() && max_ratio > 0.0, "{row}");
    }
}

#[test]
fn decay_study_orders_rows_by_eps() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "ds.toml",
        "n = 32\n[integrator]\nt_end = 1.0\n[initial]\nseed = 5\n\
         [decay]\neps_list = [1e-2, 1e-3]\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["decay-study", "--config", &cfg, "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(outdir.join("decay_study.csv")).unwrap();
    let eps: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(eps, vec![1e-3, 1e-2]);
    for line in csv.lines().skip(1) {
        assert!(line.contains("completed"), "{line}");
    }
}

#[test]
fn explicit_band_initial_data_is_accepted() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "band.toml",
        "n = 32\n[integrator]\nt_end = 0.1\n[initial]\neps = 1e-2\nseed = 2\nband = 4\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["run", "--config", &cfg, "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(outdir.join("summary.json")).unwrap()).unwrap();
    // the band-limited draw still satisfies the data normalizations
    assert!((summary["mass"].as_f64().unwrap() - 1.0).abs() < 1e-13);
    let mom = summary["momentum"].as_array().unwrap();
    assert!(mom[0].as_f64().unwrap().abs() < 1e-14);
}

#[test]
fn primitive_formulation_runs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "prim.toml",
        "n = 32\nformulation = \"primitive\"\n[integrator]\nt_end = 0.2\n\
         [initial]\neps = 1e-2\nseed = 9\n",
    );
    let outdir = tmp.path().join("out");
    let out = bin()
        .args(["run", "--config", &cfg, "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    // snapshots carry the primitive field names
    assert!(outdir.join("snapshots/0000_rho.bin").exists());
    assert!(outdir.join("snapshots/0000_theta_abs.bin").exists());
}
