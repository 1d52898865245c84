//! The five subcommands: run, verify-ops, verify-lemmas, cross-check, and
//! decay-study.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use mhd2d::analysis::sampling::random_h_scaled;
use mhd2d::analysis::{
    conserved_quantities, fit_decay, run_lemma_ensembles, DecayFit, DiagnosticsRecord,
    EnsembleConfig,
};
use mhd2d::presets;
use mhd2d::spectral::{
    derivative, fractional_laplacian, inverse_laplacian, project_q, sobolev_norm, Axis2,
};
use mhd2d::timestepper::{integrate, EvolveState, RunOutcome, Status};
use mhd2d::{Field, Params, PerturbationState, PrimitiveState, VectorField};

use crate::artifacts::{fmt, write_diagnostics_csv, write_json, write_snapshot};
use crate::config::{Formulation, Resolved};
use crate::CliError;

/// Exit codes shared by main.
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_POSITIVITY: u8 = 3;
pub const EXIT_NONFINITE: u8 = 4;

// ---------------------------------------------------------------------------
// initial data

/// Build the initial perturbation state from the resolved config: either a
/// named preset, or (when `initial.band` is set) a raw random draw limited
/// to that band. Both paths enforce the data normalizations `int rho_0 = 1`
/// and `int rho_0 u_0 = 0`.
fn build_initial(cfg: &Resolved) -> Result<PerturbationState, CliError> {
    if let Some(band) = cfg.band {
        let per_comp = cfg.eps / 5f64.sqrt();
        let g = cfg.grid;
        let mut s = PerturbationState {
            a: random_h_scaled(g, cfg.seed, band, 3.0, per_comp),
            u: VectorField::new(
                random_h_scaled(g, cfg.seed + 1, band, 3.0, per_comp),
                random_h_scaled(g, cfg.seed + 2, band, 3.0, per_comp),
            ),
            theta: random_h_scaled(g, cfg.seed + 3, band, 3.0, per_comp),
            m: random_h_scaled(g, cfg.seed + 4, band, 3.0, per_comp),
            time: 0.0,
        };
        let rho = s.a.map(|a| 1.0 + a);
        let mass = rho.mean();
        let cx = rho.mul_pointwise(&s.u.x).mean() / mass;
        let cy = rho.mul_pointwise(&s.u.y).mean() / mass;
        s.u.x = s.u.x.map(move |v| v - cx);
        s.u.y = s.u.y.map(move |v| v - cy);
        Ok(s)
    } else {
        presets::by_name(&cfg.preset, cfg.grid, cfg.eps, cfg.seed).ok_or_else(|| {
            CliError::Config(format!(
                "initial.preset: unknown preset '{}' (expected equilibrium, small-random \
                 or transported-blob)",
                cfg.preset
            ))
        })
    }
}

// ---------------------------------------------------------------------------
// run

/// States the run loop knows how to diagnose and snapshot.
trait RunnableState: EvolveState {
    fn as_perturbation(&self) -> PerturbationState;
    fn snapshot_fields(&self) -> Vec<(&'static str, Field)>;
}

impl RunnableState for PerturbationState {
    fn as_perturbation(&self) -> PerturbationState {
        self.clone()
    }
    fn snapshot_fields(&self) -> Vec<(&'static str, Field)> {
        vec![
            ("a", self.a.clone()),
            ("u1", self.u.x.clone()),
            ("u2", self.u.y.clone()),
            ("theta", self.theta.clone()),
            ("m", self.m.clone()),
        ]
    }
}

impl RunnableState for PrimitiveState {
    fn as_perturbation(&self) -> PerturbationState {
        self.to_perturbation()
    }
    fn snapshot_fields(&self) -> Vec<(&'static str, Field)> {
        vec![
            ("rho", self.rho.clone()),
            ("u1", self.u.x.clone()),
            ("u2", self.u.y.clone()),
            ("theta_abs", self.theta_abs.clone()),
            ("m", self.m.clone()),
        ]
    }
}

/// Full diagnostics when the gas constants are the unit-normalized ones the
/// perturbation structure assumes; otherwise the perturbation-derived
/// columns (sigma, G, E, D, residuals) are written as NaN and everything
/// else is still measured.
fn measure_row(s: &PerturbationState, p: &Params) -> DiagnosticsRecord {
    DiagnosticsRecord::measure(s, p).unwrap_or_else(|_| {
        let prim = s.to_primitive();
        let (mass, momentum, total_energy, magnetic_mass) = conserved_quantities(&prim, p);
        let h3 = |f: &Field| sobolev_norm(f, 3.0).expect("s = 3");
        DiagnosticsRecord {
            time: s.time,
            mass,
            momentum,
            total_energy,
            magnetic_mass,
            h3_a: h3(&s.a),
            h3_u: (h3(&s.u.x).powi(2) + h3(&s.u.y).powi(2)).sqrt(),
            h3_theta: h3(&s.theta),
            h3_m: h3(&s.m),
            h3_sigma: f64::NAN,
            h3_g: f64::NAN,
            energy_e: f64::NAN,
            dissipation_d: f64::NAN,
            residual_g: f64::NAN,
            residual_sigma: f64::NAN,
        }
    })
}

pub fn run(cfg: &Resolved, out: &Path) -> Result<u8, CliError> {
    std::fs::create_dir_all(out.join("snapshots"))
        .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", out.display())))?;
    let s0 = build_initial(cfg)?;
    match cfg.formulation {
        Formulation::Perturbation => run_with(s0, cfg, out),
        Formulation::Primitive => run_with(s0.to_primitive(), cfg, out),
    }
}

fn run_with<S: RunnableState>(s0: S, cfg: &Resolved, out: &Path) -> Result<u8, CliError> {
    let snap_dir = out.join("snapshots");
    let c = cfg.integrator();

    let mut rows: Vec<DiagnosticsRecord> = Vec::new();
    let mut snap_idx = 0usize;
    let mut next_snap = 0.0f64;
    let mut last_snap_time = f64::NEG_INFINITY;
    let mut snap_err: Option<CliError> = None;

    let outcome: RunOutcome<S> = integrate(&s0, &cfg.params, &c, |t, s| {
        rows.push(measure_row(&s.as_perturbation(), &cfg.params));
        if cfg.snapshot_interval > 0.0 && t + 1e-9 >= next_snap && snap_err.is_none() {
            if let Err(e) = snapshot_state(&snap_dir, snap_idx, t, s) {
                snap_err = Some(e);
                return;
            }
            last_snap_time = t;
            snap_idx += 1;
            while t + 1e-9 >= next_snap {
                next_snap += cfg.snapshot_interval;
            }
        }
    })
    .map_err(|e| CliError::Config(format!("run: {e}")))?;
    if let Some(e) = snap_err {
        return Err(e);
    }
    // make sure the last valid state is always on disk
    if cfg.snapshot_interval > 0.0 && outcome.state.time() > last_snap_time + 1e-9 {
        snapshot_state(&snap_dir, snap_idx, outcome.state.time(), &outcome.state)?;
    }

    write_diagnostics_csv(&out.join("diagnostics.csv"), &rows)?;
    write_json(&out.join("summary.json"), &summary(cfg, &rows, &outcome))?;

    match outcome.status {
        Status::Completed => {
            println!(
                "run: completed, {} steps of dt = {}, artifacts in {}",
                outcome.steps,
                fmt(outcome.dt),
                out.display()
            );
            Ok(0)
        }
        Status::PositivityBreach { time, min_rho } => {
            eprintln!("run: density positivity breach at t = {time}: min rho = {min_rho}");
            Ok(EXIT_POSITIVITY)
        }
        Status::NonFinite { time } => {
            eprintln!("run: non-finite value at t = {time}; stopped at the last good state");
            Ok(EXIT_NONFINITE)
        }
    }
}

fn snapshot_state<S: RunnableState>(
    dir: &Path,
    index: usize,
    t: f64,
    s: &S,
) -> Result<(), CliError> {
    for (name, field) in s.snapshot_fields() {
        write_snapshot(dir, index, name, t, &field)?;
    }
    Ok(())
}

fn summary<S: RunnableState>(
    cfg: &Resolved,
    rows: &[DiagnosticsRecord],
    outcome: &RunOutcome<S>,
) -> serde_json::Value {
    let first = rows.first().expect("observer runs at least once");
    let last = rows.last().expect("observer runs at least once");
    let times: Vec<f64> = rows.iter().map(|r| r.time).collect();
    let window = (0.2 * cfg.t_end, cfg.t_end);
    let fit = |values: Vec<f64>| -> serde_json::Value {
        match fit_decay(&times, &values, window) {
            Ok(DecayFit { rate, r_squared, .. }) => json!({ "rate": rate, "r_squared": r_squared }),
            Err(_) => serde_json::Value::Null,
        }
    };
    let rel = |x: f64, x0: f64| {
        if x0.abs() > 0.0 { (x - x0).abs() / x0.abs() } else { (x - x0).abs() }
    };
    let status = match outcome.status {
        Status::Completed => "completed".to_string(),
        Status::PositivityBreach { .. } => "positivity-breach".to_string(),
        Status::NonFinite { .. } => "non-finite".to_string(),
    };
    let opt = |x: f64| if x.is_finite() { json!(x) } else { serde_json::Value::Null };
    json!({
        "status": status,
        "steps": outcome.steps,
        "dt": outcome.dt,
        "mass": first.mass,
        "momentum": first.momentum,
        "e0": first.total_energy,
        "energy_e0": opt(first.energy_e),
        "final": {
            "time": last.time,
            "h3_a": last.h3_a,
            "h3_u": last.h3_u,
            "h3_theta": last.h3_theta,
            "h3_m": last.h3_m,
        },
        "drifts": {
            "mass": rel(last.mass, first.mass),
            "total_energy": rel(last.total_energy, first.total_energy),
            "momentum_abs": (last.momentum[0].powi(2) + last.momentum[1].powi(2)).sqrt(),
            "magnetic_mass_abs": (last.magnetic_mass - first.magnetic_mass).abs(),
        },
        "decay_fits": {
            "h3_u_sq": fit(rows.iter().map(|r| r.h3_u.powi(2)).collect()),
            "h3_theta_sq": fit(rows.iter().map(|r| r.h3_theta.powi(2)).collect()),
        },
    })
}

// ---------------------------------------------------------------------------
// verify-ops

pub fn verify_ops() -> Result<u8, CliError> {
    let start = Instant::now();
    let g = mhd2d::Grid::new(32).map_err(|e| CliError::Failure(e.to_string()))?;
    let sin_x = Field::from_fn(g, |x, _| (2.0 * PI * x).sin());
    let cos_x = Field::from_fn(g, |x, _| (2.0 * PI * x).cos());
    let w = 2.0 * PI;
    let tol = 1e-10;

    let rel = |got: &Field, want: &Field, scale: f64| got.sub(want).max_abs() / scale;
    let grad_mode = VectorField::new(sin_x.clone(), Field::zeros(g));
    let q = project_q(&grad_mode);
    let shear_mode = VectorField::new(Field::zeros(g), sin_x.clone());
    let qs = project_q(&shear_mode);
    let l2 = sobolev_norm(&sin_x, 0.0).expect("s = 0");
    let h1 = sobolev_norm(&sin_x, 1.0).expect("s = 1");
    let h1_exact = ((1.0 + w * w) / 2.0).sqrt();

    let lam = |s: f64| fractional_laplacian(&sin_x, s).expect("s >= 0");
    let checks: Vec<(&str, f64)> = vec![
        ("derivative d/dx1 sin", rel(&derivative(&sin_x, Axis2::X1), &cos_x.scale(w), w)),
        ("derivative d/dx2 of x1-only field", derivative(&sin_x, Axis2::X2).max_abs()),
        ("fractional laplacian s=1", rel(&lam(1.0), &sin_x.scale(w), w)),
        ("fractional laplacian s=2", rel(&lam(2.0), &sin_x.scale(w * w), w * w)),
        (
            "inverse laplacian",
            rel(&inverse_laplacian(&sin_x), &sin_x.scale(-1.0 / (w * w)), 1.0 / (w * w)),
        ),
        ("Q keeps gradient mode", rel(&q.x, &grad_mode.x, 1.0).max(q.y.max_abs())),
        ("Q kills shear mode", qs.x.max_abs().max(qs.y.max_abs())),
        ("L2 norm of sin", (l2 - 0.5f64.sqrt()).abs() / 0.5f64.sqrt()),
        ("H1 norm of sin", (h1 - h1_exact).abs() / h1_exact),
    ];

    let mut all_pass = true;
    for (name, err) in &checks {
        let ok = *err <= tol;
        all_pass &= ok;
        println!(
            "verify-ops: {name}: {} (error {:.3e}, tolerance {tol:.0e})",
            if ok { "pass" } else { "FAIL" },
            err
        );
    }
    println!(
        "verify-ops: {} ({} checks in {:.0} ms)",
        if all_pass { "all checks pass" } else { "FAILED" },
        checks.len(),
        start.elapsed().as_secs_f64() * 1e3
    );
    if all_pass {
        Ok(0)
    } else {
        Err(CliError::Failure("verify-ops: at least one operator check failed".into()))
    }
}

// ---------------------------------------------------------------------------
// verify-lemmas

pub fn verify_lemmas(cfg: &Resolved, out: &Path) -> Result<u8, CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", out.display())))?;
    let ec = EnsembleConfig {
        samples: cfg.lemma_samples,
        ..EnsembleConfig::new(cfg.grid, cfg.lemma_base_seed)
    };
    let reports =
        run_lemma_ensembles(&ec).map_err(|e| CliError::Failure(format!("verify-lemmas: {e}")))?;

    let path = out.join("lemmas.csv");
    let mut text = String::from("lemma,samples,max_ratio,mean_ratio\n");
    for r in &reports {
        text += &format!("{},{},{},{}\n", r.lemma, r.samples, fmt(r.max_ratio), fmt(r.mean_ratio));
    }
    std::fs::write(&path, &text)
        .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;

    let mut all_finite = true;
    for r in &reports {
        let ok = r.max_ratio.is_finite() && r.max_ratio > 0.0;
        all_finite &= ok;
        println!(
            "verify-lemmas: {:<18} {} samples, max ratio {:.4e}, mean ratio {:.4e}{}",
            r.lemma,
            r.samples,
            r.max_ratio,
            r.mean_ratio,
            if ok { "" } else { "  <- NOT FINITE" }
        );
    }
    println!("verify-lemmas: table written to {}", path.display());
    if all_finite {
        Ok(0)
    } else {
        Err(CliError::Failure("verify-lemmas: a ratio was non-finite".into()))
    }
}

// ---------------------------------------------------------------------------
// cross-check

/// Discrepancy bound asserted by cross-check (the acceptance tolerance for
/// the reference configuration eps = 1e-2, T = 1).
const CROSS_CHECK_TOL: f64 = 1e-8;

pub fn cross_check(cfg: &Resolved) -> Result<u8, CliError> {
    let s0 = build_initial(cfg)?;
    let c = cfg.integrator();
    let pert = integrate(&s0, &cfg.params, &c, |_, _| {})
        .map_err(|e| CliError::Config(format!("cross-check: {e}")))?;
    let prim = integrate(&s0.to_primitive(), &cfg.params, &c, |_, _| {})
        .map_err(|e| CliError::Config(format!("cross-check: {e}")))?;
    for (label, status) in [("perturbation", &pert.status), ("primitive", &prim.status)] {
        if *status != Status::Completed {
            return Err(CliError::Failure(format!(
                "cross-check: {label} run did not complete: {status:?}"
            )));
        }
    }
    let discrepancy = pert.state.h3_distance(&prim.state.to_perturbation());
    let ok = discrepancy <= CROSS_CHECK_TOL;
    println!(
        "cross-check: H^3 discrepancy at T = {} is {} ({} tolerance {CROSS_CHECK_TOL:.0e})",
        cfg.t_end,
        fmt(discrepancy),
        if ok { "within" } else { "EXCEEDS" }
    );
    if ok {
        Ok(0)
    } else {
        Err(CliError::Failure(format!(
            "cross-check: discrepancy {discrepancy:.3e} exceeds {CROSS_CHECK_TOL:.0e}"
        )))
    }
}

// ---------------------------------------------------------------------------
// decay-study

pub fn decay_study(cfg: &Resolved, out: &Path) -> Result<u8, CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", out.display())))?;
    let mut eps_list = cfg.eps_list.clone();
    eps_list.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));

    // sweep members run concurrently; output order is fixed by eps
    let results: Vec<Result<DecayRow, CliError>> = eps_list
        .par_iter()
        .map(|&eps| decay_member(cfg, eps))
        .collect();
    let rows: Vec<DecayRow> = results.into_iter().collect::<Result<_, _>>()?;

    let path = out.join("decay_study.csv");
    let mut text =
        String::from("eps,status,rate_u_sq,r2_u_sq,rate_theta_sq,r2_theta_sq,sup_h3_am,decays\n");
    for r in &rows {
        text += &format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.eps),
            r.status,
            fmt(r.rate_u),
            fmt(r.r2_u),
            fmt(r.rate_theta),
            fmt(r.r2_theta),
            fmt(r.sup_h3_am),
            r.decays
        );
        println!(
            "decay-study: eps {:.1e}: {}, rate(|u|^2) {:.4} (r^2 {:.4}), \
             rate(|theta|^2) {:.4} (r^2 {:.4}), sup |(a,m)|_H3 {:.3e}, decays: {}",
            r.eps, r.status, r.rate_u, r.r2_u, r.rate_theta, r.r2_theta, r.sup_h3_am, r.decays
        );
    }
    std::fs::write(&path, &text)
        .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
    println!("decay-study: table written to {}", path.display());
    Ok(0)
}

struct DecayRow {
    eps: f64,
    status: &'static str,
    rate_u: f64,
    r2_u: f64,
    rate_theta: f64,
    r2_theta: f64,
    sup_h3_am: f64,
    decays: bool,
}

fn decay_member(cfg: &Resolved, eps: f64) -> Result<DecayRow, CliError> {
    let member = Resolved { eps, ..cfg.clone() };
    let s0 = build_initial(&member)?;
    let c = member.integrator();
    let mut times = Vec::new();
    let mut u_sq = Vec::new();
    let mut theta_sq = Vec::new();
    let mut sup_h3_am = 0.0f64;
    let out = integrate(&s0, &member.params, &c, |t, s: &PerturbationState| {
        let h3 = |f: &Field| sobolev_norm(f, 3.0).expect("s = 3");
        times.push(t);
        u_sq.push(h3(&s.u.x).powi(2) + h3(&s.u.y).powi(2));
        theta_sq.push(h3(&s.theta).powi(2));
        sup_h3_am = sup_h3_am.max((h3(&s.a).powi(2) + h3(&s.m).powi(2)).sqrt());
    })
    .map_err(|e| CliError::Config(format!("decay-study (eps = {eps}): {e}")))?;

    let status = match out.status {
        Status::Completed => "completed",
        Status::PositivityBreach { .. } => "positivity-breach",
        Status::NonFinite { .. } => "non-finite",
    };
    let window = (0.2 * member.t_end, member.t_end);
    let fit = |v: &[f64]| {
        fit_decay(&times, v, window)
            .map(|f| (f.rate, f.r_squared))
            .unwrap_or((f64::NAN, f64::NAN))
    };
    let (rate_u, r2_u) = fit(&u_sq);
    let (rate_theta, r2_theta) = fit(&theta_sq);
    let decays = out.status == Status::Completed
        && rate_u > 0.0
        && r2_u >= 0.98
        && rate_theta > 0.0
        && r2_theta >= 0.98;
    Ok(DecayRow {
        eps,
        status,
        rate_u,
        r2_u,
        rate_theta,
        r2_theta,
        sup_h3_am,
        decays,
    })
}
