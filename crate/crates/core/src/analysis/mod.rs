//! Verification instruments: conserved quantities, the bootstrap
//! functionals `E(t)`/`D(t)`, decay-rate fitting, and empirical ratio
//! checkers for the functional inequalities the energy method leans on.

pub mod decay;
pub mod diagnostics;
pub mod ensembles;
pub mod inequalities;
pub mod sampling;

pub use decay::{check_energy_inequality, fit_decay, DecayFit, EnergyReport};
pub use diagnostics::{bootstrap_functionals, conserved_quantities, DiagnosticsRecord};
pub use ensembles::{run_lemma_ensembles, EnsembleConfig, EnsembleReport};
pub use inequalities::{
    verify_commutator, verify_composition, verify_product, verify_poincare_variant,
    verify_theta_poincare, verify_weighted_poincare, Composition, InequalityReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("series contains a non-positive value ({value}) at t = {time}; cannot fit a log-linear decay")]
    NonPositiveSeries { time: f64, value: f64 },
    #[error("need at least {needed} samples in the window, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("inequality checker precondition violated: {0}")]
    BadInput(String),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}
