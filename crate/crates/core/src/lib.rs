//! Pseudo-spectral simulation of the 2.5-D compressible, viscous,
//! non-resistive, heat-conducting MHD system on the unit torus, together
//! with the diagnostics needed to probe its conservation laws, good-unknown
//! structure, energy/dissipation functionals and decay behaviour.
//!
//! The planar flow carries a vertical magnetic component `m` that is purely
//! transported (no magnetic diffusion). Everything lives on `T^2` with
//! `|T^2| = 1`; all derivatives are Fourier multipliers and all nonlinear
//! products are dealiased with the 2/3 rule.

pub mod analysis;
pub mod model;
pub mod presets;
pub mod spectral;
pub mod timestepper;

pub use model::{Params, PerturbationState, PrimitiveState};
pub use spectral::{Field, Grid, VectorField};
