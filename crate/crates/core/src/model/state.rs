use crate::spectral::{sobolev_norm, Field, Grid, VectorField};

use super::{ModelError, Params};

/// State in primitive variables `(rho, u, theta_abs, m)`.
#[derive(Debug, Clone)]
pub struct PrimitiveState {
    /// Density `rho`.
    pub rho: Field,
    /// Planar velocity.
    pub u: VectorField,
    /// Absolute temperature `vartheta`.
    pub theta_abs: Field,
    /// Vertical magnetic component.
    pub m: Field,
    pub time: f64,
}

/// State in perturbation variables `(a, u, theta, m)` with
/// `a = rho - 1`, `theta = theta_abs - 1`.
#[derive(Debug, Clone)]
pub struct PerturbationState {
    pub a: Field,
    pub u: VectorField,
    pub theta: Field,
    pub m: Field,
    pub time: f64,
}

/// Time derivative of a state; the same shape serves both formulations
/// (`density` holds `d rho/dt` or `d a/dt`, `temperature` holds
/// `d theta_abs/dt` or `d theta/dt`).
#[derive(Debug, Clone)]
pub struct Tendency {
    pub density: Field,
    pub velocity: VectorField,
    pub temperature: Field,
    pub magnetic: Field,
}

impl PrimitiveState {
    pub fn equilibrium(grid: Grid) -> Self {
        PrimitiveState {
            rho: Field::constant(grid, 1.0),
            u: VectorField::zeros(grid),
            theta_abs: Field::constant(grid, 1.0),
            m: Field::zeros(grid),
            time: 0.0,
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    /// Fails with `PositivityBreach` when the density dips below the floor.
    pub fn validate(&self, params: &Params) -> Result<(), ModelError> {
        let min_rho = self.rho.min();
        if min_rho < params.rho_floor {
            return Err(ModelError::PositivityBreach {
                time: self.time,
                min_rho,
                floor: params.rho_floor,
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite()
            && self.u.is_finite()
            && self.theta_abs.is_finite()
            && self.m.is_finite()
    }

    pub fn to_perturbation(&self) -> PerturbationState {
        PerturbationState {
            a: self.rho.map(|v| v - 1.0),
            u: self.u.clone(),
            theta: self.theta_abs.map(|v| v - 1.0),
            m: self.m.clone(),
            time: self.time,
        }
    }

    /// `H^3` distance to another state, summed in quadrature over all
    /// components (the velocity contributes both of its components).
    pub fn h3_distance(&self, other: &Self) -> f64 {
        let comps = [
            self.rho.sub(&other.rho),
            self.u.x.sub(&other.u.x),
            self.u.y.sub(&other.u.y),
            self.theta_abs.sub(&other.theta_abs),
            self.m.sub(&other.m),
        ];
        norm_set(&comps)
    }
}

impl PerturbationState {
    pub fn zero(grid: Grid) -> Self {
        PerturbationState {
            a: Field::zeros(grid),
            u: VectorField::zeros(grid),
            theta: Field::zeros(grid),
            m: Field::zeros(grid),
            time: 0.0,
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.a.grid()
    }

    pub fn validate(&self, params: &Params) -> Result<(), ModelError> {
        let min_rho = 1.0 + self.a.min();
        if min_rho < params.rho_floor {
            return Err(ModelError::PositivityBreach {
                time: self.time,
                min_rho,
                floor: params.rho_floor,
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.u.is_finite() && self.theta.is_finite() && self.m.is_finite()
    }

    pub fn to_primitive(&self) -> PrimitiveState {
        PrimitiveState {
            rho: self.a.map(|v| v + 1.0),
            u: self.u.clone(),
            theta_abs: self.theta.map(|v| v + 1.0),
            m: self.m.clone(),
            time: self.time,
        }
    }

    /// Combined `H^3` norm of `(a, u, theta, m)`.
    pub fn h3_norm(&self) -> f64 {
        let comps = [
            self.a.clone(),
            self.u.x.clone(),
            self.u.y.clone(),
            self.theta.clone(),
            self.m.clone(),
        ];
        norm_set(&comps)
    }

    pub fn h3_distance(&self, other: &Self) -> f64 {
        let comps = [
            self.a.sub(&other.a),
            self.u.x.sub(&other.u.x),
            self.u.y.sub(&other.u.y),
            self.theta.sub(&other.theta),
            self.m.sub(&other.m),
        ];
        norm_set(&comps)
    }
}

impl Tendency {
    pub fn zeros(grid: Grid) -> Self {
        Tendency {
            density: Field::zeros(grid),
            velocity: VectorField::zeros(grid),
            temperature: Field::zeros(grid),
            magnetic: Field::zeros(grid),
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.density.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.density.is_finite()
            && self.velocity.is_finite()
            && self.temperature.is_finite()
            && self.magnetic.is_finite()
    }

    pub fn add_scaled(&self, other: &Tendency, alpha: f64) -> Tendency {
        Tendency {
            density: self.density.add_scaled(&other.density, alpha),
            velocity: self.velocity.add_scaled(&other.velocity, alpha),
            temperature: self.temperature.add_scaled(&other.temperature, alpha),
            magnetic: self.magnetic.add_scaled(&other.magnetic, alpha),
        }
    }

    pub fn scale(&self, alpha: f64) -> Tendency {
        Tendency {
            density: self.density.scale(alpha),
            velocity: self.velocity.scale(alpha),
            temperature: self.temperature.scale(alpha),
            magnetic: self.magnetic.scale(alpha),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.density
            .max_abs()
            .max(self.velocity.x.max_abs())
            .max(self.velocity.y.max_abs())
            .max(self.temperature.max_abs())
            .max(self.magnetic.max_abs())
    }
}

fn norm_set(fields: &[Field]) -> f64 {
    fields
        .iter()
        .map(|f| sobolev_norm(f, 3.0).expect("s = 3").powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sampling::random_band_limited;
    use std::f64::consts::PI;

    #[test]
    fn equilibrium_maps_to_zero_perturbation() {
        let g = Grid::new(16).unwrap();
        let p = PrimitiveState::equilibrium(g).to_perturbation();
        assert!(p.a.max_abs() < 1e-15);
        assert!(p.theta.max_abs() < 1e-15);
        assert!(p.h3_norm() < 1e-14);
    }

    #[test]
    fn round_trip_is_identity() {
        let g = Grid::new(16).unwrap();
        let s = PerturbationState {
            a: random_band_limited(g, 1, 4, 0.1),
            u: VectorField::new(
                random_band_limited(g, 2, 4, 0.1),
                random_band_limited(g, 3, 4, 0.1),
            ),
            theta: random_band_limited(g, 4, 4, 0.1),
            m: random_band_limited(g, 5, 4, 0.1),
            time: 1.5,
        };
        let back = s.to_primitive().to_perturbation();
        // (1 + a) - 1 is exact, but storing 1 + a rounds a at the 1e-16
        // level; the H^3 weight amplifies that roundoff by ~(2 pi k)^3
        assert!(s.h3_distance(&back) < 1e-10);
        assert_eq!(back.time, 1.5);
    }

    #[test]
    fn affine_shift_definition() {
        let g = Grid::new(16).unwrap();
        let mut s = PerturbationState::zero(g);
        s.a = Field::from_fn(g, |x, _| 0.1 * (2.0 * PI * x).cos());
        let prim = s.to_primitive();
        let expect = Field::from_fn(g, |x, _| 1.0 + 0.1 * (2.0 * PI * x).cos());
        assert!(prim.rho.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn positivity_guard_fires() {
        let g = Grid::new(16).unwrap();
        let params = Params::default();
        let mut s = PrimitiveState::equilibrium(g);
        s.rho = Field::constant(g, 0.2);
        assert!(matches!(
            s.validate(&params),
            Err(ModelError::PositivityBreach { .. })
        ));
    }
}
