//! Per-sample diagnostics: conserved integrals, Sobolev norms of every
//! field, the bootstrap functionals, and the structural residuals.

use ndarray::Zip;

use crate::model::{
    compute_good_unknowns, residual_g, residual_sigma, ModelError, Params, PerturbationState,
    PrimitiveState,
};
use crate::spectral::{gradient, sobolev_norm, Field, VectorField};

/// One row of the diagnostics series.
#[derive(Debug, Clone)]
pub struct DiagnosticsRecord {
    pub time: f64,
    /// Total mass `int rho`.
    pub mass: f64,
    /// Total momentum `int rho u` (two components).
    pub momentum: [f64; 2],
    /// Total energy `int (C_nu rho theta_abs + rho |u|^2 / 2 + m^2 / 2)`.
    pub total_energy: f64,
    /// `int m`.
    pub magnetic_mass: f64,
    pub h3_a: f64,
    pub h3_u: f64,
    pub h3_theta: f64,
    pub h3_m: f64,
    pub h3_sigma: f64,
    pub h3_g: f64,
    /// Bootstrap energy `E = ||(sigma, u, theta, G)||_{H^3}^2`.
    pub energy_e: f64,
    /// Dissipation `D = ||sigma||_{H^3}^2 + ||(grad u, grad theta, grad G)||_{H^3}^2`.
    pub dissipation_d: f64,
    pub residual_g: f64,
    pub residual_sigma: f64,
}

/// Torus integrals by spectral quadrature (grid means on the unit torus):
/// `(mass, momentum, total energy, magnetic mass)`.
pub fn conserved_quantities(s: &PrimitiveState, p: &Params) -> (f64, [f64; 2], f64, f64) {
    let mass = s.rho.mean();
    let momentum = [
        s.rho.mul_pointwise(&s.u.x).mean(),
        s.rho.mul_pointwise(&s.u.y).mean(),
    ];
    let energy = Zip::from(s.rho.values())
        .and(s.theta_abs.values())
        .and(s.u.x.values())
        .and(s.u.y.values())
        .and(s.m.values())
        .fold(0.0, |acc, &r, &t, &ux, &uy, &m| {
            acc + p.c_nu * r * t + 0.5 * r * (ux * ux + uy * uy) + 0.5 * m * m
        })
        / (s.grid().n() * s.grid().n()) as f64;
    (mass, momentum, energy, s.m.mean())
}

/// `(E, D)` of the bootstrap argument. Requires `R = C_nu = 1` (the
/// functionals are defined on the perturbation formulation).
pub fn bootstrap_functionals(s: &PerturbationState, p: &Params) -> Result<(f64, f64), ModelError> {
    let gu = compute_good_unknowns(s, p);
    let sq = |f: &Field| sobolev_norm(f, 3.0).expect("s = 3").powi(2);
    let grad_sq = |f: &Field| {
        let g = gradient(f);
        sq(&g.x) + sq(&g.y)
    };
    let vec_sq = |v: &VectorField| sq(&v.x) + sq(&v.y);
    let vec_grad_sq = |v: &VectorField| grad_sq(&v.x) + grad_sq(&v.y);

    p.require_unit_gas()?;
    let e = sq(&gu.sigma) + vec_sq(&s.u) + sq(&s.theta) + vec_sq(&gu.g);
    let d = sq(&gu.sigma) + vec_grad_sq(&s.u) + grad_sq(&s.theta) + vec_grad_sq(&gu.g);
    Ok((e, d))
}

impl DiagnosticsRecord {
    /// Full measurement of a perturbation state (requires `R = C_nu = 1`).
    pub fn measure(s: &PerturbationState, p: &Params) -> Result<Self, ModelError> {
        let prim = s.to_primitive();
        let (mass, momentum, total_energy, magnetic_mass) = conserved_quantities(&prim, p);
        let gu = compute_good_unknowns(s, p);
        let (energy_e, dissipation_d) = bootstrap_functionals(s, p)?;
        let h3 = |f: &Field| sobolev_norm(f, 3.0).expect("s = 3");
        Ok(DiagnosticsRecord {
            time: s.time,
            mass,
            momentum,
            total_energy,
            magnetic_mass,
            h3_a: h3(&s.a),
            h3_u: (h3(&s.u.x).powi(2) + h3(&s.u.y).powi(2)).sqrt(),
            h3_theta: h3(&s.theta),
            h3_m: h3(&s.m),
            h3_sigma: h3(&gu.sigma),
            h3_g: (h3(&gu.g.x).powi(2) + h3(&gu.g.y).powi(2)).sqrt(),
            energy_e,
            dissipation_d,
            residual_g: residual_g(s, p)?,
            residual_sigma: residual_sigma(s, p)?,
        })
    }
}
