//! TOML run configuration: schema, defaults, and validation.
//!
//! Every key is optional; omitted keys fall back to the defaults listed in
//! the README. Unknown keys are rejected with an error naming the key, and
//! range checks name the offending key in their message.

use std::path::Path;

use serde::Deserialize;
use mhd2d::timestepper::Scheme;
use mhd2d::{Grid, Params};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Perturbation,
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SchemeName {
    Rk4,
    Ifrk4,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    n: Option<usize>,
    formulation: Option<Formulation>,
    params: ParamsSection,
    integrator: IntegratorSection,
    initial: InitialSection,
    output: OutputSection,
    lemmas: LemmasSection,
    decay: DecaySection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ParamsSection {
    mu: Option<f64>,
    lambda: Option<f64>,
    kappa: Option<f64>,
    c_nu: Option<f64>,
    gas_r: Option<f64>,
    rho_floor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct IntegratorSection {
    scheme: Option<SchemeName>,
    dt_max: Option<f64>,
    t_end: Option<f64>,
    cfl_advective: Option<f64>,
    cfl_diffusive: Option<f64>,
    sample_interval: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct InitialSection {
    preset: Option<String>,
    eps: Option<f64>,
    seed: Option<u64>,
    band: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct OutputSection {
    snapshot_interval: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LemmasSection {
    samples: Option<usize>,
    base_seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct DecaySection {
    eps_list: Option<Vec<f64>>,
}

/// Fully resolved configuration: defaults applied, command-line overrides
/// merged, every value validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub grid: Grid,
    pub formulation: Formulation,
    pub params: Params,
    pub scheme: Scheme,
    pub dt_max: f64,
    pub t_end: f64,
    pub cfl_advective: f64,
    pub cfl_diffusive: f64,
    pub sample_interval: f64,
    pub preset: String,
    pub eps: f64,
    pub seed: u64,
    /// When set, draw raw random data band-limited to `|k| <= band` instead
    /// of using the named preset.
    pub band: Option<i64>,
    pub snapshot_interval: f64,
    pub lemma_samples: usize,
    pub lemma_base_seed: u64,
    pub eps_list: Vec<f64>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    /// Subcommand-specific default for `integrator.t_end`.
    pub default_t_end: f64,
}

pub fn load(path: Option<&Path>, ov: &Overrides) -> Result<Resolved, CliError> {
    let file: FileConfig = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read config file {}: {e}", p.display()))
            })?;
            toml::from_str(&text).map_err(|e| {
                CliError::Config(format!("config file {}: {e}", p.display()))
            })?
        }
        None => FileConfig::default(),
    };
    resolve(file, ov)
}

fn resolve(f: FileConfig, ov: &Overrides) -> Result<Resolved, CliError> {
    let bad = |msg: String| Err(CliError::Config(msg));

    let n = f.n.unwrap_or(64);
    let grid = match Grid::new(n) {
        Ok(g) => g,
        Err(e) => return bad(format!("n: {e}")),
    };

    let d = Params::default();
    let params = Params::new(
        f.params.mu.unwrap_or(d.mu),
        f.params.lambda.unwrap_or(d.lambda),
        f.params.kappa.unwrap_or(d.kappa),
        f.params.c_nu.unwrap_or(d.c_nu),
        f.params.gas_r.unwrap_or(d.gas_r),
        f.params.rho_floor.unwrap_or(d.rho_floor),
    )
    .map_err(|e| CliError::Config(format!("params: {e}")))?;

    let scheme = match f.integrator.scheme.unwrap_or(SchemeName::Rk4) {
        SchemeName::Rk4 => Scheme::Rk4,
        SchemeName::Ifrk4 => Scheme::IfRk4,
    };
    let dt_max = f.integrator.dt_max.unwrap_or(0.05);
    if !(dt_max > 0.0) {
        return bad(format!("integrator.dt_max must be > 0, got {dt_max}"));
    }
    let t_end = f.integrator.t_end.unwrap_or(ov.default_t_end);
    if !(t_end >= 0.0) {
        return bad(format!("integrator.t_end must be >= 0, got {t_end}"));
    }
    let cfl_advective = f.integrator.cfl_advective.unwrap_or(0.5);
    if !(cfl_advective > 0.0) {
        return bad(format!(
            "integrator.cfl_advective must be > 0, got {cfl_advective}"
        ));
    }
    let cfl_diffusive = f.integrator.cfl_diffusive.unwrap_or(0.4);
    if !(cfl_diffusive > 0.0) {
        return bad(format!(
            "integrator.cfl_diffusive must be > 0, got {cfl_diffusive}"
        ));
    }
    let sample_interval = f.integrator.sample_interval.unwrap_or(0.05);
    if !(sample_interval > 0.0) {
        return bad(format!(
            "integrator.sample_interval must be > 0, got {sample_interval}"
        ));
    }

    let preset = ov
        .preset
        .clone()
        .or(f.initial.preset)
        .unwrap_or_else(|| "small-random".to_string());
    let eps = f.initial.eps.unwrap_or(1e-2);
    if !(eps > 0.0) {
        return bad(format!("initial.eps must be > 0, got {eps}"));
    }
    let seed = ov.seed.or(f.initial.seed).unwrap_or(7);
    if let Some(band) = f.initial.band {
        if band < 1 {
            return bad(format!("initial.band must be >= 1, got {band}"));
        }
    }

    let snapshot_interval = f.output.snapshot_interval.unwrap_or(2.5);
    if !(snapshot_interval >= 0.0) {
        return bad(format!(
            "output.snapshot_interval must be >= 0, got {snapshot_interval}"
        ));
    }

    let lemma_samples = f.lemmas.samples.unwrap_or(200);
    if lemma_samples == 0 {
        return bad("lemmas.samples must be >= 1, got 0".to_string());
    }

    let eps_list = f.decay.eps_list.unwrap_or_else(|| vec![1e-3, 1e-2]);
    if eps_list.is_empty() {
        return bad("decay.eps_list must not be empty".to_string());
    }
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0)) {
        return bad(format!("decay.eps_list entries must be > 0, got {e}"));
    }

    Ok(Resolved {
        grid,
        formulation: f.formulation.unwrap_or(Formulation::Perturbation),
        params,
        scheme,
        dt_max,
        t_end,
        cfl_advective,
        cfl_diffusive,
        sample_interval,
        preset,
        eps,
        seed,
        band: f.initial.band,
        snapshot_interval,
        lemma_samples,
        lemma_base_seed: f.lemmas.base_seed.unwrap_or(2024),
        eps_list,
    })
}

impl Resolved {
    pub fn integrator(&self) -> mhd2d::timestepper::IntegratorConfig {
        mhd2d::timestepper::IntegratorConfig {
            scheme: self.scheme,
            cfl_advective: self.cfl_advective,
            cfl_diffusive: self.cfl_diffusive,
            dt_max: self.dt_max,
            t_end: self.t_end,
            sample_interval: self.sample_interval,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov() -> Overrides {
        Overrides {
            default_t_end: 10.0,
            ..Overrides::default()
        }
    }

    #[test]
    fn empty_config_gives_defaults() {
        let r = resolve(toml::from_str("").unwrap(), &ov()).unwrap();
        assert_eq!(r.grid.n(), 64);
        assert_eq!(r.formulation, Formulation::Perturbation);
        assert_eq!(r.scheme, Scheme::Rk4);
        assert_eq!(r.t_end, 10.0);
        assert_eq!(r.preset, "small-random");
        assert_eq!(r.eps_list, vec![1e-3, 1e-2]);
    }

    #[test]
    fn unknown_key_is_named() {
        let e = toml::from_str::<FileConfig>("frobnicate = 1").unwrap_err();
        assert!(e.to_string().contains("frobnicate"));
        let e = toml::from_str::<FileConfig>("[initial]\nepsilon = 0.1").unwrap_err();
        assert!(e.to_string().contains("epsilon"));
    }

    #[test]
    fn range_errors_name_the_key() {
        let f: FileConfig = toml::from_str("[initial]\neps = -1.0").unwrap();
        let e = resolve(f, &ov()).unwrap_err();
        assert!(e.to_string().contains("initial.eps"));

        let f: FileConfig = toml::from_str("[integrator]\ndt_max = 0.0").unwrap();
        let e = resolve(f, &ov()).unwrap_err();
        assert!(e.to_string().contains("integrator.dt_max"));
    }

    #[test]
    fn overrides_win() {
        let f: FileConfig = toml::from_str("[initial]\npreset = \"equilibrium\"\nseed = 3").unwrap();
        let o = Overrides {
            preset: Some("transported-blob".into()),
            seed: Some(99),
            default_t_end: 10.0,
        };
        let r = resolve(f, &o).unwrap();
        assert_eq!(r.preset, "transported-blob");
        assert_eq!(r.seed, 99);
    }

    #[test]
    fn scheme_and_formulation_parse() {
        let f: FileConfig =
            toml::from_str("formulation = \"primitive\"\n[integrator]\nscheme = \"ifrk4\"").unwrap();
        let r = resolve(f, &ov()).unwrap();
        assert_eq!(r.formulation, Formulation::Primitive);
        assert_eq!(r.scheme, Scheme::IfRk4);
    }
}
