//! State containers and right-hand sides for the primitive system, the
//! perturbation system, and the good-unknown quantities used by the
//! dissipation diagnostics.

mod good_unknowns;
mod params;
mod rhs;
mod state;

pub use good_unknowns::{
    compute_f3, compute_good_unknowns, compute_m_term, compute_n_term, residual_g, residual_sigma,
    GoodUnknowns,
};
pub use params::Params;
pub use rhs::{rhs_perturbation, rhs_primitive};
pub use state::{PerturbationState, PrimitiveState, Tendency};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("density positivity breach at t = {time}: min rho = {min_rho} < floor {floor}")]
    PositivityBreach { time: f64, min_rho: f64, floor: f64 },
    #[error(
        "perturbation formulation requires R = C_nu = 1 (got R = {gas_r}, C_nu = {c_nu}); \
         rescale the primitive problem instead"
    )]
    UnsupportedGasConstants { gas_r: f64, c_nu: f64 },
}
