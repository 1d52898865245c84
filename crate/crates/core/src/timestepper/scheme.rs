//! The two step kernels and the dissipative semigroup they share.

use num_complex::Complex64;

use crate::model::{ModelError, Params, Tendency};
use crate::spectral::{Field, Grid, VectorField};

use super::IntegratorError;

/// What the integrator needs from a state. Implemented for both the
/// primitive and the perturbation formulation.
pub trait EvolveState: Clone {
    fn grid(&self) -> Grid;
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    /// Full right-hand side of the evolution equations.
    fn rhs(&self, p: &Params) -> Result<Tendency, ModelError>;
    /// `self + dt * tendency` (time untouched).
    fn add_scaled(&self, t: &Tendency, dt: f64) -> Self;
    fn max_speed(&self) -> f64;
    fn is_finite(&self) -> bool;
    /// `exp(dt L)` where `L` is the constant-coefficient dissipative part:
    /// `nu Lap` on `Qu`, `mu Lap` on `(I-Q)u`, `(kappa/C_nu) Lap` on the
    /// temperature; density and magnetic fields pass through.
    fn apply_dissipation_semigroup(&self, p: &Params, dt: f64) -> Self;
    /// `L` itself applied to the state, as a tendency (zero on the density
    /// and magnetic components).
    fn apply_dissipation_generator(&self, p: &Params) -> Tendency;
    /// Projection onto the retained (dealiased) Fourier band. Applied after
    /// every step: the discrete dynamics map the band into itself, so this
    /// is analytically the identity along trajectories — it only removes
    /// the roundoff that each step scatters beyond the band, which nothing
    /// ever damps (density and magnetic field have no diffusion) and which
    /// the `H^3` weight would otherwise amplify by ~1e6.
    fn truncate(&self) -> Self;
}

/// Classical RK4 on the full right-hand side.
pub(super) fn step_rk4<S: EvolveState>(s: &S, p: &Params, dt: f64) -> Result<S, IntegratorError> {
    let k1 = s.rhs(p)?;
    let k2 = s.add_scaled(&k1, dt / 2.0).rhs(p)?;
    let k3 = s.add_scaled(&k2, dt / 2.0).rhs(p)?;
    let k4 = s.add_scaled(&k3, dt).rhs(p)?;
    let combined = k1
        .add_scaled(&k2, 2.0)
        .add_scaled(&k3, 2.0)
        .add_scaled(&k4, 1.0);
    Ok(s.add_scaled(&combined, dt / 6.0))
}

/// Lawson integrating-factor RK4: classical RK4 applied to
/// `w(t) = exp(-tL) y(t)`, whose equation has no stiff linear part. With
/// `E = exp(dt L)`, `Eh = exp(dt/2 L)` and `N(v) = rhs(v) - Lv`:
///
/// ```text
/// g1 = N(y)
/// g2 = N(Eh y + (dt/2) Eh g1)
/// g3 = N(Eh y + (dt/2) g2)
/// g4 = N(E y + dt Eh g3)
/// y' = E y + (dt/6) (E g1 + 2 Eh (g2 + g3) + g4)
/// ```
pub(super) fn step_ifrk4<S: EvolveState>(s: &S, p: &Params, dt: f64) -> Result<S, IntegratorError> {
    let nonlinear = |v: &S| -> Result<Tendency, IntegratorError> {
        let lv = v.apply_dissipation_generator(p);
        Ok(v.rhs(p)?.add_scaled(&lv, -1.0))
    };
    let half = |t: &Tendency| exp_tendency(t, p, dt / 2.0);
    let full = |t: &Tendency| exp_tendency(t, p, dt);

    let ey = s.apply_dissipation_semigroup(p, dt);
    let ehy = s.apply_dissipation_semigroup(p, dt / 2.0);

    let g1 = nonlinear(s)?;
    let g2 = nonlinear(&ehy.add_scaled(&half(&g1), dt / 2.0))?;
    let g3 = nonlinear(&ehy.add_scaled(&g2, dt / 2.0))?;
    let g4 = nonlinear(&ey.add_scaled(&half(&g3), dt))?;

    let combined = full(&g1)
        .add_scaled(&half(&g2), 2.0)
        .add_scaled(&half(&g3), 2.0)
        .add_scaled(&g4, 1.0);
    Ok(ey.add_scaled(&combined, dt / 6.0))
}

/// Apply `exp(dt L)` to the dissipative components of a tendency.
fn exp_tendency(t: &Tendency, p: &Params, dt: f64) -> Tendency {
    let (velocity, temperature) = exp_dissipation(&t.velocity, &t.temperature, p, dt);
    Tendency {
        density: t.density.clone(),
        velocity,
        temperature,
        magnetic: t.magnetic.clone(),
    }
}

/// `exp(dt L)` on a velocity/temperature pair: per mode `k`,
/// `u_hat -> exp(-dt mu w) (u_hat - q) + exp(-dt nu w) q` with `w = |2 pi k|^2`
/// and `q` the projection of `u_hat` onto `k`; `theta_hat -> exp(-dt kappa/C_nu w)
/// theta_hat`. The `k = 0` mode is untouched.
pub(crate) fn exp_dissipation(
    u: &VectorField,
    theta: &Field,
    p: &Params,
    dt: f64,
) -> (VectorField, Field) {
    let grid = theta.grid();
    let n = grid.n();
    // strip the O(1) background (theta_abs ~ 1 in the primitive formulation)
    // before transforming; the semigroup fixes the mean anyway
    let th_mean = theta.mean();
    let mut ux = u.x.to_spectral();
    let mut uy = u.y.to_spectral();
    let mut th = theta.map(move |v| v - th_mean).to_spectral();
    let kappa_eff = p.kappa / p.c_nu;

    for i in 0..n {
        for j in 0..n {
            let k1 = grid.angular(i);
            let k2 = grid.angular(j);
            let w = k1 * k1 + k2 * k2;
            if w == 0.0 {
                continue;
            }
            let e_mu = (-dt * p.mu * w).exp();
            let a = ux.coeffs()[[i, j]];
            let b = uy.coeffs()[[i, j]];
            if grid.is_nyquist(i) || grid.is_nyquist(j) {
                // a Nyquist bin stands for both +-n/2, so the projection
                // k k^T / |k|^2 cannot be assigned a conjugate-consistent
                // off-diagonal sign; treat the bin as pure shear
                ux.coeffs_mut()[[i, j]] = e_mu * a;
                uy.coeffs_mut()[[i, j]] = e_mu * b;
            } else {
                let e_nu = (-dt * p.nu() * w).exp();
                // projection onto k (the compressible part of the mode)
                let dot = (a * k1 + b * k2) / w;
                let qx = dot * k1;
                let qy = dot * k2;
                ux.coeffs_mut()[[i, j]] = e_mu * (a - qx) + e_nu * qx;
                uy.coeffs_mut()[[i, j]] = e_mu * (b - qy) + e_nu * qy;
            }
            th.coeffs_mut()[[i, j]] *= Complex64::from((-dt * kappa_eff * w).exp());
        }
    }
    (
        VectorField::new(ux.to_physical(), uy.to_physical()),
        th.to_physical().map(move |v| v + th_mean),
    )
}

/// The generator `L` on a velocity/temperature pair: same mode split as
/// `exp_dissipation` with the exponential replaced by `-c w`.
pub(crate) fn l_dissipation(
    u: &VectorField,
    theta: &Field,
    p: &Params,
) -> (VectorField, Field) {
    let grid = theta.grid();
    let n = grid.n();
    let th_mean = theta.mean();
    let mut ux = u.x.to_spectral();
    let mut uy = u.y.to_spectral();
    let mut th = theta.map(move |v| v - th_mean).to_spectral();
    let kappa_eff = p.kappa / p.c_nu;

    for i in 0..n {
        for j in 0..n {
            let k1 = grid.angular(i);
            let k2 = grid.angular(j);
            let w = k1 * k1 + k2 * k2;
            if w == 0.0 {
                continue;
            }
            let a = ux.coeffs()[[i, j]];
            let b = uy.coeffs()[[i, j]];
            if grid.is_nyquist(i) || grid.is_nyquist(j) {
                // same Nyquist convention as exp_dissipation
                ux.coeffs_mut()[[i, j]] = -p.mu * w * a;
                uy.coeffs_mut()[[i, j]] = -p.mu * w * b;
            } else {
                let dot = (a * k1 + b * k2) / w;
                let qx = dot * k1;
                let qy = dot * k2;
                ux.coeffs_mut()[[i, j]] = -p.mu * w * (a - qx) - p.nu() * w * qx;
                uy.coeffs_mut()[[i, j]] = -p.mu * w * (b - qy) - p.nu() * w * qy;
            }
            th.coeffs_mut()[[i, j]] *= Complex64::from(-kappa_eff * w);
        }
    }
    (
        VectorField::new(ux.to_physical(), uy.to_physical()),
        th.to_physical(),
    )
}
