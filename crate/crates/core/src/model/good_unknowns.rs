//! Effective pressure `sigma = a + m^2/2`, the damped good unknown
//! `G = Qu - (1/nu) inv_lap(grad sigma)`, the nonlinear remainders `M`, `N`,
//! `f3`, and the structural residuals that certify the assembled equations
//! satisfy the identities the decay estimates rest on.

use crate::spectral::{
    dealias, divergence, gradient, inverse_laplacian, l2_norm, laplacian, project_q, Field,
    VectorField,
};

use super::{rhs_perturbation, ModelError, Params, PerturbationState, Tendency};

/// The derived pair `(sigma, G)`.
#[derive(Debug, Clone)]
pub struct GoodUnknowns {
    /// Effective pressure `sigma = a + m^2/2`.
    pub sigma: Field,
    /// `G = Qu - (1/nu) inv_lap(grad sigma)`; a mean-free gradient field.
    pub g: VectorField,
}

/// `sigma` and `G` of a perturbation state.
pub fn compute_good_unknowns(s: &PerturbationState, p: &Params) -> GoodUnknowns {
    let sigma = dealias(&s.a.add_scaled(&s.m.mul_pointwise(&s.m), 0.5));
    let grad_sigma = gradient(&sigma);
    let correction = VectorField::new(
        inverse_laplacian(&grad_sigma.x),
        inverse_laplacian(&grad_sigma.y),
    );
    let g = project_q(&s.u).add_scaled(&correction, -1.0 / p.nu());
    GoodUnknowns { sigma, g }
}

/// `f3 = -u . grad sigma - sigma div u - (m^2/2) div u`, the forcing in the
/// sigma-equation `d sigma/dt + div u = f3`.
pub fn compute_f3(s: &PerturbationState) -> Field {
    let sigma = dealias(&s.a.add_scaled(&s.m.mul_pointwise(&s.m), 0.5));
    let grad_sigma = gradient(&sigma);
    let divu = divergence(&s.u);
    let mut f3 = s.u.x.mul_pointwise(&grad_sigma.x);
    f3 = f3.add_scaled(&s.u.y.mul_pointwise(&grad_sigma.y), 1.0);
    f3 = f3.add_scaled(&sigma.mul_pointwise(&divu), 1.0);
    f3 = f3.add_scaled(&s.m.mul_pointwise(&s.m).mul_pointwise(&divu), 0.5);
    dealias(&f3.scale(-1.0))
}

/// `M = -u.grad u + I(a) grad sigma - I(a)(mu Lap u + (lambda+mu) grad div u)
///      - theta grad J(a)`, the momentum remainder once the constant-coefficient
/// dissipation is split off.
pub fn compute_m_term(s: &PerturbationState, p: &Params) -> Result<VectorField, ModelError> {
    s.validate(p)?;
    let sigma = dealias(&s.a.add_scaled(&s.m.mul_pointwise(&s.m), 0.5));
    let grad_sigma = gradient(&sigma);
    let grad_a = gradient(&s.a);
    let i_a = s.a.map(|a| a / (1.0 + a));
    let inv_rho = s.a.map(|a| 1.0 / (1.0 + a));
    let lap = VectorField::new(laplacian(&s.u.x), laplacian(&s.u.y));
    let grad_div = gradient(&divergence(&s.u));

    let component = |u_comp: &Field,
                     sg: &Field,
                     lap_c: &Field,
                     gd: &Field,
                     a_c: &Field| {
        let gx = gradient(u_comp);
        let mut out = s
            .u
            .x
            .mul_pointwise(&gx.x)
            .add_scaled(&s.u.y.mul_pointwise(&gx.y), 1.0)
            .scale(-1.0);
        out = out.add_scaled(&i_a.mul_pointwise(sg), 1.0);
        let visc = lap_c.scale(p.mu).add_scaled(gd, p.lambda + p.mu);
        out = out.add_scaled(&i_a.mul_pointwise(&visc), -1.0);
        // grad J(a) = grad a / (1 + a), evaluated pointwise
        let grad_j = inv_rho.mul_pointwise(a_c);
        out.add_scaled(&s.theta.mul_pointwise(&grad_j), -1.0)
    };
    Ok(VectorField::new(
        dealias(&component(&s.u.x, &grad_sigma.x, &lap.x, &grad_div.x, &grad_a.x)),
        dealias(&component(&s.u.y, &grad_sigma.y, &lap.y, &grad_div.y, &grad_a.y)),
    ))
}

/// `N = -div(theta u) - kappa I(a) Lap theta
///      + (1/(1+a))(2 mu |D(u)|^2 + lambda (div u)^2)`.
pub fn compute_n_term(s: &PerturbationState, p: &Params) -> Result<Field, ModelError> {
    s.validate(p)?;
    let grad_t = gradient(&s.theta);
    let divu = divergence(&s.u);
    let i_a = s.a.map(|a| a / (1.0 + a));
    let inv_rho = s.a.map(|a| 1.0 / (1.0 + a));
    let lap_t = laplacian(&s.theta);

    // div(theta u) expanded as u.grad theta + theta div u so the grouping
    // matches the perturbation right-hand side exactly
    let mut out = s
        .u
        .x
        .mul_pointwise(&grad_t.x)
        .add_scaled(&s.u.y.mul_pointwise(&grad_t.y), 1.0)
        .add_scaled(&s.theta.mul_pointwise(&divu), 1.0)
        .scale(-1.0);
    out = out.add_scaled(&i_a.mul_pointwise(&lap_t), -p.kappa);

    let gu1 = gradient(&s.u.x);
    let gu2 = gradient(&s.u.y);
    let n = s.grid().n();
    let heating = Field::from_values(
        s.grid(),
        ndarray::Array2::from_shape_fn((n, n), |idx| {
            let d_sq = gu1.x.values()[idx].powi(2)
                + gu2.y.values()[idx].powi(2)
                + 0.5 * (gu1.y.values()[idx] + gu2.x.values()[idx]).powi(2);
            let du = divu.values()[idx];
            inv_rho.values()[idx] * (2.0 * p.mu * d_sq + p.lambda * du * du)
        }),
    );
    Ok(dealias(&out.add_scaled(&heating, 1.0)))
}

/// Relative `L^2` residual of the damped G-equation
/// `dG/dt - nu Lap G = (1/nu) Qu + QM - grad theta - (1/nu) inv_lap(grad f3)`,
/// with `dG/dt` assembled by the chain rule from the perturbation tendencies.
pub fn residual_g(s: &PerturbationState, p: &Params) -> Result<f64, ModelError> {
    let nu = p.nu();
    let t = rhs_perturbation(s, p)?;
    let gu = compute_good_unknowns(s, p);
    let d_sigma = sigma_rate(s, &t);

    // dG/dt = Q(du/dt) - (1/nu) inv_lap(grad d(sigma)/dt)
    let grad_ds = gradient(&d_sigma);
    let lhs = project_q(&t.velocity)
        .add_scaled(
            &VectorField::new(inverse_laplacian(&grad_ds.x), inverse_laplacian(&grad_ds.y)),
            -1.0 / nu,
        )
        .add_scaled(
            &VectorField::new(laplacian(&gu.g.x), laplacian(&gu.g.y)),
            -nu,
        );

    let m = compute_m_term(s, p)?;
    let f3 = compute_f3(s);
    let grad_f3 = gradient(&f3);
    let grad_t = gradient(&s.theta);
    let rhs = project_q(&s.u)
        .scale(1.0 / nu)
        .add_scaled(&project_q(&m), 1.0)
        .add_scaled(&grad_t, -1.0)
        .add_scaled(
            &VectorField::new(inverse_laplacian(&grad_f3.x), inverse_laplacian(&grad_f3.y)),
            -1.0 / nu,
        );

    Ok(relative_l2_vec(&lhs, &rhs))
}

/// Relative `L^2` residual of the damped transport equation
/// `d sigma/dt + (1/nu) sigma = -div G + f3`, comparing mean-free parts
/// (on the torus `div(inv_lap(grad sigma)) = sigma - mean(sigma)`, so the
/// identity only holds modulo the spatial mean).
pub fn residual_sigma(s: &PerturbationState, p: &Params) -> Result<f64, ModelError> {
    let nu = p.nu();
    let t = rhs_perturbation(s, p)?;
    let gu = compute_good_unknowns(s, p);
    let d_sigma = sigma_rate(s, &t);

    let lhs = mean_free(&d_sigma.add_scaled(&gu.sigma, 1.0 / nu));
    let rhs = mean_free(
        &divergence(&gu.g)
            .scale(-1.0)
            .add_scaled(&compute_f3(s), 1.0),
    );
    Ok(relative_l2(&lhs, &rhs))
}

/// `d sigma/dt = da/dt + m dm/dt` by the chain rule on `sigma = a + m^2/2`.
fn sigma_rate(s: &PerturbationState, t: &Tendency) -> Field {
    dealias(&t.density.add_scaled(&s.m.mul_pointwise(&t.magnetic), 1.0))
}

fn mean_free(f: &Field) -> Field {
    let mu = f.mean();
    f.map(move |v| v - mu)
}

fn relative_l2(lhs: &Field, rhs: &Field) -> f64 {
    let denom = l2_norm(lhs).max(l2_norm(rhs));
    if denom < 1e-14 {
        return 0.0;
    }
    l2_norm(&lhs.sub(rhs)) / denom
}

fn relative_l2_vec(lhs: &VectorField, rhs: &VectorField) -> f64 {
    let norm = |v: &VectorField| (l2_norm(&v.x).powi(2) + l2_norm(&v.y).powi(2)).sqrt();
    let denom = norm(lhs).max(norm(rhs));
    if denom < 1e-14 {
        return 0.0;
    }
    norm(&lhs.sub(rhs)) / denom
}
