//! Empirical ratio checkers for the functional inequalities of the a-priori
//! estimates. Each checker evaluates the left-hand side spectrally, the
//! right-hand side with all constants set to 1, and reports the ratio — the
//! constants themselves are unknowable, so nothing here asserts a bound.
//!
//! `L^inf` norms are grid maxima throughout (adequate for the band-limited
//! ensembles these run on).

use crate::model::PerturbationState;
use crate::spectral::{
    fractional_laplacian, gradient, l2_norm, multiply_dealiased, sobolev_norm, Field,
};

use super::AnalysisError;

/// One inequality evaluation: `lhs <= C * rhs_unit_constant`.
#[derive(Debug, Clone, Copy)]
pub struct InequalityReport {
    pub lhs: f64,
    /// Right-hand side with every constant `C` replaced by 1.
    pub rhs_unit_constant: f64,
    /// `lhs / rhs_unit_constant`; an empirical lower bound on `C`.
    pub ratio: f64,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        InequalityReport {
            lhs,
            rhs_unit_constant: rhs,
            ratio,
        }
    }
}

/// Which composition `F` to test in the smooth-composition estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// `F(a) = a / (1 + a)`.
    I,
    /// `F(a) = ln(1 + a)`.
    J,
}

/// Weighted Poincaré: `int rho (u - int rho u)^2 <= C ||grad u||_{L^2}^2`,
/// for `rho >= 0` with `int rho = 1` (caller normalizes).
pub fn verify_weighted_poincare(rho: &Field, u: &Field) -> Result<InequalityReport, AnalysisError> {
    if rho.min() < 0.0 {
        return Err(AnalysisError::BadInput("rho must be nonnegative".into()));
    }
    let weighted_mean = rho.mul_pointwise(u).mean() / rho.mean();
    let centered = u.map(move |v| v - weighted_mean);
    let lhs = rho.mul_pointwise(&centered.mul_pointwise(&centered)).mean();
    let g = gradient(u);
    let rhs = l2_norm(&g.x).powi(2) + l2_norm(&g.y).powi(2);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Poincaré variant: `||u||_{L^2}^2 <= C (||grad u||_{L^2}^2 + (int rho |u|)^2)`.
pub fn verify_poincare_variant(rho: &Field, u: &Field) -> Result<InequalityReport, AnalysisError> {
    if rho.min() < 0.0 {
        return Err(AnalysisError::BadInput("rho must be nonnegative".into()));
    }
    let lhs = l2_norm(u).powi(2);
    let g = gradient(u);
    let weighted_l1 = rho.mul_pointwise(&u.map(f64::abs)).mean();
    let rhs = l2_norm(&g.x).powi(2) + l2_norm(&g.y).powi(2) + weighted_l1 * weighted_l1;
    Ok(InequalityReport::new(lhs, rhs))
}

/// Temperature Poincaré under energy normalization:
/// `||theta||_{L^2}^2 <= C (||grad theta||_{L^2}^2 + ||grad u||_{L^2}^4 +
/// ||sigma||_{L^2}^2)`, valid for states with `c0 <= rho, theta_abs <= 1/c0`
/// and total energy `e0 = 1` (checked here with `c0 = 1/4`).
pub fn verify_theta_poincare(s: &PerturbationState) -> Result<InequalityReport, AnalysisError> {
    let c0 = 0.25;
    let rho_min = 1.0 + s.a.min();
    let rho_max = 1.0 + s.a.max();
    let th_min = 1.0 + s.theta.min();
    let th_max = 1.0 + s.theta.max();
    if rho_min < c0 || rho_max > 1.0 / c0 || th_min < c0 || th_max > 1.0 / c0 {
        return Err(AnalysisError::BadInput(format!(
            "state violates the bounds {c0} <= rho, theta_abs <= {}",
            1.0 / c0
        )));
    }
    // e0 = int (rho theta_abs + rho |u|^2 / 2 + m^2 / 2), normalized to 1
    let rho = s.a.map(|a| 1.0 + a);
    let theta_abs = s.theta.map(|t| 1.0 + t);
    let e0 = rho.mul_pointwise(&theta_abs).mean()
        + 0.5 * rho
            .mul_pointwise(
                &s.u.x
                    .mul_pointwise(&s.u.x)
                    .add_scaled(&s.u.y.mul_pointwise(&s.u.y), 1.0),
            )
            .mean()
        + 0.5 * s.m.mul_pointwise(&s.m).mean();
    if (e0 - 1.0).abs() > 1e-10 {
        return Err(AnalysisError::BadInput(format!(
            "state must be normalized to e0 = 1 (got e0 = {e0})"
        )));
    }

    let lhs = l2_norm(&s.theta).powi(2);
    let gt = gradient(&s.theta);
    let gux = gradient(&s.u.x);
    let guy = gradient(&s.u.y);
    let grad_u_sq = l2_norm(&gux.x).powi(2)
        + l2_norm(&gux.y).powi(2)
        + l2_norm(&guy.x).powi(2)
        + l2_norm(&guy.y).powi(2);
    let sigma = s.a.add_scaled(&s.m.mul_pointwise(&s.m), 0.5);
    let rhs = l2_norm(&gt.x).powi(2) + l2_norm(&gt.y).powi(2) + grad_u_sq * grad_u_sq
        + l2_norm(&sigma).powi(2);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Product estimate:
/// `||f g||_{H^s} <= C (||f||_inf ||g||_{H^s} + ||g||_inf ||f||_{H^s})`.
pub fn verify_product(f: &Field, g: &Field, s: f64) -> Result<InequalityReport, AnalysisError> {
    let lhs = sobolev_norm(&multiply_dealiased(f, g), s)
        .map_err(|e| AnalysisError::BadInput(e.to_string()))?;
    let rhs = f.max_abs() * sobolev_norm(g, s).unwrap() + g.max_abs() * sobolev_norm(f, s).unwrap();
    Ok(InequalityReport::new(lhs, rhs))
}

/// Commutator estimate, evaluated on the directional derivative `f d1 g`
/// (the vector field `(f, 0)`, a representative special case):
/// `||[Lam^s, f d1] g||_{L^2} <= C (||grad f||_inf ||Lam^s g||_{L^2} +
/// ||Lam^s f||_{L^2} ||grad g||_inf)`.
pub fn verify_commutator(f: &Field, g: &Field, s: f64) -> Result<InequalityReport, AnalysisError> {
    let bad = |e: crate::spectral::SpectralError| AnalysisError::BadInput(e.to_string());
    let dg = gradient(g).x;
    let term1 = fractional_laplacian(&multiply_dealiased(f, &dg), s).map_err(bad)?;
    let lam_g = fractional_laplacian(g, s).map_err(bad)?;
    let term2 = multiply_dealiased(f, &gradient(&lam_g).x);
    let lhs = l2_norm(&term1.sub(&term2));

    let gf = gradient(f);
    let gg = gradient(g);
    let grad_inf = |v: &crate::spectral::VectorField| {
        v.x.max_abs().max(v.y.max_abs())
    };
    let rhs = grad_inf(&gf) * l2_norm(&lam_g)
        + l2_norm(&fractional_laplacian(f, s).map_err(bad)?) * grad_inf(&gg);
    Ok(InequalityReport::new(lhs, rhs))
}

/// Composition estimate for the smooth `F` with `F(0) = 0` appearing in
/// the system's nonlinearities:
/// `||F(f)||_{H^s} <= C (1 + ||f||_inf)^(floor(s)+1) ||f||_{H^s}`,
/// requiring the smallness `||f||_inf <= 1/2`.
pub fn verify_composition(
    which: Composition,
    f: &Field,
    s: f64,
) -> Result<InequalityReport, AnalysisError> {
    let sup = f.max_abs();
    if sup > 0.5 {
        return Err(AnalysisError::BadInput(format!(
            "composition estimate requires ||f||_inf <= 1/2 (got {sup})"
        )));
    }
    let composed = match which {
        Composition::I => f.map(|a| a / (1.0 + a)),
        Composition::J => f.map(|a| (1.0 + a).ln()),
    };
    let lhs = sobolev_norm(&composed, s).map_err(|e| AnalysisError::BadInput(e.to_string()))?;
    let rhs = (1.0 + sup).powi(s.floor() as i32 + 1) * sobolev_norm(f, s).unwrap();
    Ok(InequalityReport::new(lhs, rhs))
}
