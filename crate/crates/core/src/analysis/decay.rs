//! Log-linear decay fitting and the discrete energy-inequality check.

use super::diagnostics::DiagnosticsRecord;
use super::AnalysisError;

/// Result of a least-squares fit of `log E` against `t`.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// Fitted `c` in `E ~ C exp(-c t)` (minus the slope of the log fit).
    pub rate: f64,
    /// Coefficient of determination; 0 by convention for a constant series.
    pub r_squared: f64,
    /// The `[t0, t1]` window actually fitted.
    pub window: (f64, f64),
}

/// Least-squares line through `(t_i, log E_i)` for samples inside `window`.
pub fn fit_decay(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<DecayFit, AnalysisError> {
    assert_eq!(times.len(), values.len());
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < window.0 - 1e-12 || t > window.1 + 1e-12 {
            continue;
        }
        if v <= 0.0 {
            return Err(AnalysisError::NonPositiveSeries { time: t, value: v });
        }
        ts.push(t);
        logs.push(v.ln());
    }
    if ts.len() < 3 {
        return Err(AnalysisError::TooFewSamples {
            needed: 3,
            got: ts.len(),
        });
    }

    let n = ts.len() as f64;
    let t_mean = ts.iter().sum::<f64>() / n;
    let l_mean = logs.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stl = 0.0;
    let mut sll = 0.0;
    for (&t, &l) in ts.iter().zip(&logs) {
        stt += (t - t_mean) * (t - t_mean);
        stl += (t - t_mean) * (l - l_mean);
        sll += (l - l_mean) * (l - l_mean);
    }
    let slope = stl / stt;
    // a constant series has sll = 0; report rate 0, r^2 0 by convention
    let r_squared = if sll > 0.0 { (stl * stl) / (stt * sll) } else { 0.0 };
    Ok(DecayFit {
        rate: -slope,
        r_squared,
        window: (ts[0], *ts.last().unwrap()),
    })
}

/// Outcome of the discrete `dE/dt + D/2 <= 0` check.
#[derive(Debug, Clone, Copy)]
pub struct EnergyReport {
    /// True when `E` is identically ~0 (equilibrium run): no ratio is defined.
    pub degenerate: bool,
    /// First sample time after which `dE/dt <= 0` holds at every later
    /// sample; `None` if monotonicity is never reached.
    pub transient_end: Option<f64>,
    /// Largest centered-difference `dE/dt` at samples past the transient.
    pub worst_dedt_after: f64,
    /// Empirical `inf` of `-(dE/dt)/D` past the transient (the quantity the
    /// energy method bounds below by 1/2 after reweighting).
    pub min_ratio: f64,
}

/// Centered-difference scan of `E(t)` over a sampled diagnostics series.
pub fn check_energy_inequality(records: &[DiagnosticsRecord]) -> Result<EnergyReport, AnalysisError> {
    if records.len() < 3 {
        return Err(AnalysisError::TooFewSamples {
            needed: 3,
            got: records.len(),
        });
    }
    let e_max = records.iter().map(|r| r.energy_e).fold(0.0, f64::max);
    if e_max < 1e-28 {
        return Ok(EnergyReport {
            degenerate: true,
            transient_end: None,
            worst_dedt_after: 0.0,
            min_ratio: 0.0,
        });
    }

    // centered differences at interior samples
    let mut dedt = Vec::with_capacity(records.len() - 2);
    for w in records.windows(3) {
        let dt = w[2].time - w[0].time;
        dedt.push((w[1].time, (w[2].energy_e - w[0].energy_e) / dt, w[1].dissipation_d));
    }

    // earliest interior sample from which dE/dt stays nonpositive
    let mut transient_idx = None;
    for i in (0..dedt.len()).rev() {
        if dedt[i].1 > 0.0 {
            break;
        }
        transient_idx = Some(i);
    }
    let Some(idx) = transient_idx else {
        return Ok(EnergyReport {
            degenerate: false,
            transient_end: None,
            worst_dedt_after: dedt.iter().map(|d| d.1).fold(f64::MIN, f64::max),
            min_ratio: f64::NAN,
        });
    };

    let tail = &dedt[idx..];
    let worst = tail.iter().map(|d| d.1).fold(f64::MIN, f64::max);
    let min_ratio = tail
        .iter()
        .filter(|d| d.2 > 1e-300)
        .map(|d| -d.1 / d.2)
        .fold(f64::INFINITY, f64::min);
    Ok(EnergyReport {
        degenerate: false,
        transient_end: Some(dedt[idx].0),
        worst_dedt_after: worst,
        min_ratio,
    })
}
