//! Fixed-step time integration: classical RK4 on the full right-hand side,
//! or an integrating-factor RK4 (Lawson) variant that applies the exact
//! Fourier exponential of the constant-coefficient dissipative part — the
//! linearization around equilibrium — between stages.

mod scheme;

pub use scheme::EvolveState;

use crate::model::{ModelError, Params, PerturbationState, PrimitiveState};

/// Time integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Classical explicit 4-stage Runge–Kutta.
    Rk4,
    /// Integrating-factor RK4: exact exponential of `mu Lap` / `nu Lap`
    /// (split by `Q`) on the velocity and `(kappa/C_nu) Lap` on the
    /// temperature, RK4 on the remainder. No diffusive step restriction.
    IfRk4,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Advective CFL number (default 0.5).
    pub cfl_advective: f64,
    /// Diffusive CFL number; only active under `Rk4` (default 0.4).
    pub cfl_diffusive: f64,
    /// Hard upper bound on the step size.
    pub dt_max: f64,
    /// Final time; `0` means "observe the initial state and stop".
    pub t_end: f64,
    /// Cadence at which the observer is invoked.
    pub sample_interval: f64,
}

impl IntegratorConfig {
    pub fn new(scheme: Scheme, dt_max: f64, t_end: f64) -> Self {
        IntegratorConfig {
            scheme,
            cfl_advective: 0.5,
            cfl_diffusive: 0.4,
            dt_max,
            t_end,
            sample_interval: 0.05,
        }
    }

    pub fn validate(&self) -> Result<(), IntegratorError> {
        let bad = |msg: &str| Err(IntegratorError::BadConfig(msg.to_string()));
        if !(self.cfl_advective > 0.0) {
            return bad("cfl_advective must be > 0");
        }
        if !(self.cfl_diffusive > 0.0) {
            return bad("cfl_diffusive must be > 0");
        }
        if !(self.dt_max > 0.0) {
            return bad("dt_max must be > 0");
        }
        if !(self.t_end >= 0.0) {
            return bad("t_end must be >= 0");
        }
        if !(self.sample_interval > 0.0) {
            return bad("sample_interval must be > 0");
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IntegratorError {
    #[error("invalid integrator configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Why an integration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Completed,
    /// Density fell below the floor; `time` is where the guard fired.
    PositivityBreach { time: f64, min_rho: f64 },
    /// A non-finite value appeared; integration stops at the last good state.
    NonFinite { time: f64 },
}

/// Result of [`integrate`]: the last valid state plus stop reason.
#[derive(Debug, Clone)]
pub struct RunOutcome<S> {
    pub state: S,
    pub status: Status,
    /// Steps actually taken.
    pub steps: usize,
    /// The fixed step size used.
    pub dt: f64,
}

/// Fixed step size from the initial state: the minimum of `dt_max`, the
/// advective bound `cfl_adv * dx / max|u|` (speed floored at 1e-8), and —
/// for RK4 only — the diffusive bound `cfl_diff * dx^2 / max(mu, nu, kappa)`.
pub fn compute_dt<S: EvolveState>(s: &S, p: &Params, c: &IntegratorConfig) -> f64 {
    let dx = s.grid().dx();
    let speed = s.max_speed().max(1e-8);
    let mut dt = c.dt_max.min(c.cfl_advective * dx / speed);
    if c.scheme == Scheme::Rk4 {
        dt = dt.min(c.cfl_diffusive * dx * dx / p.stiffest_coefficient());
    }
    dt
}

/// One step of the selected scheme. The returned state carries `time + dt`.
pub fn step<S: EvolveState>(
    s: &S,
    p: &Params,
    dt: f64,
    scheme: Scheme,
) -> Result<S, IntegratorError> {
    let next = match scheme {
        Scheme::Rk4 => scheme::step_rk4(s, p, dt)?,
        Scheme::IfRk4 => scheme::step_ifrk4(s, p, dt)?,
    };
    Ok(next.truncate())
}

/// Advance `s` to `t_end`, calling `observer` on the initial state, at every
/// `sample_interval`, and on the final state. The step size is fixed over the
/// run: `compute_dt` rounded so an integer number of steps lands on `t_end`.
pub fn integrate<S: EvolveState>(
    s: &S,
    p: &Params,
    c: &IntegratorConfig,
    mut observer: impl FnMut(f64, &S),
) -> Result<RunOutcome<S>, IntegratorError> {
    c.validate()?;
    p.validate().map_err(IntegratorError::Model)?;

    let mut state = s.clone();
    observer(state.time(), &state);
    if c.t_end == 0.0 {
        return Ok(RunOutcome {
            state,
            status: Status::Completed,
            steps: 0,
            dt: 0.0,
        });
    }

    let raw_dt = compute_dt(&state, p, c);
    let nsteps = (c.t_end / raw_dt).ceil().max(1.0) as usize;
    let dt = c.t_end / nsteps as f64;
    let t0 = state.time();
    let mut next_sample = c.sample_interval;

    for k in 1..=nsteps {
        let attempted_time = t0 + k as f64 * dt;
        match step(&state, p, dt, c.scheme) {
            Ok(next) => {
                if !next.is_finite() {
                    return Ok(RunOutcome {
                        state,
                        status: Status::NonFinite {
                            time: attempted_time,
                        },
                        steps: k - 1,
                        dt,
                    });
                }
                state = next;
                state.set_time(attempted_time); // exact, avoids accumulation
            }
            Err(IntegratorError::Model(ModelError::PositivityBreach {
                min_rho, ..
            })) => {
                return Ok(RunOutcome {
                    state,
                    status: Status::PositivityBreach {
                        time: attempted_time,
                        min_rho,
                    },
                    steps: k - 1,
                    dt,
                });
            }
            Err(e) => return Err(e),
        }
        let elapsed = state.time() - t0;
        if elapsed + 1e-12 >= next_sample || k == nsteps {
            observer(state.time(), &state);
            while elapsed + 1e-12 >= next_sample {
                next_sample += c.sample_interval;
            }
        }
    }

    Ok(RunOutcome {
        state,
        status: Status::Completed,
        steps: nsteps,
        dt,
    })
}

// Trait impls live here so the model module stays integration-agnostic.

impl EvolveState for PerturbationState {
    fn grid(&self) -> crate::spectral::Grid {
        PerturbationState::grid(self)
    }
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    fn rhs(&self, p: &Params) -> Result<crate::model::Tendency, ModelError> {
        crate::model::rhs_perturbation(self, p)
    }
    fn add_scaled(&self, t: &crate::model::Tendency, dt: f64) -> Self {
        PerturbationState {
            a: self.a.add_scaled(&t.density, dt),
            u: self.u.add_scaled(&t.velocity, dt),
            theta: self.theta.add_scaled(&t.temperature, dt),
            m: self.m.add_scaled(&t.magnetic, dt),
            time: self.time,
        }
    }
    fn max_speed(&self) -> f64 {
        self.u.max_speed()
    }
    fn is_finite(&self) -> bool {
        PerturbationState::is_finite(self)
    }
    fn apply_dissipation_semigroup(&self, p: &Params, dt: f64) -> Self {
        let (u, theta) = scheme::exp_dissipation(&self.u, &self.theta, p, dt);
        PerturbationState {
            a: self.a.clone(),
            u,
            theta,
            m: self.m.clone(),
            time: self.time,
        }
    }
    fn apply_dissipation_generator(&self, p: &Params) -> crate::model::Tendency {
        let (velocity, temperature) = scheme::l_dissipation(&self.u, &self.theta, p);
        crate::model::Tendency {
            density: crate::spectral::Field::zeros(self.grid()),
            velocity,
            temperature,
            magnetic: crate::spectral::Field::zeros(self.grid()),
        }
    }
    fn truncate(&self) -> Self {
        use crate::spectral::dealias;
        PerturbationState {
            a: dealias(&self.a),
            u: crate::spectral::VectorField::new(dealias(&self.u.x), dealias(&self.u.y)),
            theta: dealias(&self.theta),
            m: dealias(&self.m),
            time: self.time,
        }
    }
}

impl EvolveState for PrimitiveState {
    fn grid(&self) -> crate::spectral::Grid {
        PrimitiveState::grid(self)
    }
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    fn rhs(&self, p: &Params) -> Result<crate::model::Tendency, ModelError> {
        crate::model::rhs_primitive(self, p)
    }
    fn add_scaled(&self, t: &crate::model::Tendency, dt: f64) -> Self {
        PrimitiveState {
            rho: self.rho.add_scaled(&t.density, dt),
            u: self.u.add_scaled(&t.velocity, dt),
            theta_abs: self.theta_abs.add_scaled(&t.temperature, dt),
            m: self.m.add_scaled(&t.magnetic, dt),
            time: self.time,
        }
    }
    fn max_speed(&self) -> f64 {
        self.u.max_speed()
    }
    fn is_finite(&self) -> bool {
        PrimitiveState::is_finite(self)
    }
    fn apply_dissipation_semigroup(&self, p: &Params, dt: f64) -> Self {
        // the semigroup has zero symbol at k = 0, so the background
        // (rho = theta_abs = 1) passes through unchanged
        let (u, theta_abs) = scheme::exp_dissipation(&self.u, &self.theta_abs, p, dt);
        PrimitiveState {
            rho: self.rho.clone(),
            u,
            theta_abs,
            m: self.m.clone(),
            time: self.time,
        }
    }
    fn apply_dissipation_generator(&self, p: &Params) -> crate::model::Tendency {
        let (velocity, temperature) = scheme::l_dissipation(&self.u, &self.theta_abs, p);
        crate::model::Tendency {
            density: crate::spectral::Field::zeros(self.grid()),
            velocity,
            temperature,
            magnetic: crate::spectral::Field::zeros(self.grid()),
        }
    }
    fn truncate(&self) -> Self {
        use crate::spectral::dealias;
        PrimitiveState {
            rho: dealias(&self.rho),
            u: crate::spectral::VectorField::new(dealias(&self.u.x), dealias(&self.u.y)),
            theta_abs: dealias(&self.theta_abs),
            m: dealias(&self.m),
            time: self.time,
        }
    }
}
