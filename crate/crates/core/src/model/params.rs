use super::ModelError;

/// Physical parameters of the system.
///
/// The pressure law is `P = R rho theta_abs`; `nu = lambda + 2 mu` is the
/// effective viscosity acting on the compressible part of the velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Shear viscosity, `mu > 0`.
    pub mu: f64,
    /// Volume viscosity; only `lambda + 2 mu > 0` is required.
    pub lambda: f64,
    /// Heat conductivity, `kappa > 0`.
    pub kappa: f64,
    /// Specific heat at constant volume, `C_nu > 0`.
    pub c_nu: f64,
    /// Gas constant, `R > 0`.
    pub gas_r: f64,
    /// Positivity threshold for the density (and for `1 + a`).
    pub rho_floor: f64,
}

impl Params {
    pub fn new(
        mu: f64,
        lambda: f64,
        kappa: f64,
        c_nu: f64,
        gas_r: f64,
        rho_floor: f64,
    ) -> Result<Self, ModelError> {
        let p = Params {
            mu,
            lambda,
            kappa,
            c_nu,
            gas_r,
            rho_floor,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `R = C_nu = 1`, the normalization the perturbation
    /// formulation is written in.
    pub fn unit_gas(mu: f64, lambda: f64, kappa: f64) -> Result<Self, ModelError> {
        Params::new(mu, lambda, kappa, 1.0, 1.0, 0.25)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: &str| Err(ModelError::BadParams(msg.to_string()));
        if !(self.mu > 0.0) {
            return bad("mu must be > 0");
        }
        if !(self.lambda + 2.0 * self.mu > 0.0) {
            return bad("nu = lambda + 2 mu must be > 0");
        }
        if !(self.kappa > 0.0) {
            return bad("kappa must be > 0");
        }
        if !(self.c_nu > 0.0) {
            return bad("c_nu must be > 0");
        }
        if !(self.gas_r > 0.0) {
            return bad("gas_r must be > 0");
        }
        if !(self.rho_floor > 0.0 && self.rho_floor < 1.0) {
            return bad("rho_floor must lie in (0, 1)");
        }
        Ok(())
    }

    /// `nu = lambda + 2 mu`.
    #[inline]
    pub fn nu(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    /// Largest dissipative coefficient, the one that sets the explicit
    /// diffusive step restriction.
    #[inline]
    pub fn stiffest_coefficient(&self) -> f64 {
        self.mu.max(self.nu()).max(self.kappa)
    }

    pub(crate) fn require_unit_gas(&self) -> Result<(), ModelError> {
        if self.gas_r != 1.0 || self.c_nu != 1.0 {
            return Err(ModelError::UnsupportedGasConstants {
                gas_r: self.gas_r,
                c_nu: self.c_nu,
            });
        }
        Ok(())
    }
}

impl Default for Params {
    /// Desk-scale defaults: weak equal viscosities/conductivity, unit gas
    /// constants, density floor 0.25.
    fn default() -> Self {
        Params {
            mu: 0.02,
            lambda: 0.02,
            kappa: 0.02,
            c_nu: 1.0,
            gas_r: 1.0,
            rho_floor: 0.25,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_signs() {
        assert!(Params::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.25).is_ok());
        assert!(Params::new(0.0, 1.0, 1.0, 1.0, 1.0, 0.25).is_err());
        // lambda may be negative as long as nu > 0
        assert!(Params::new(1.0, -1.5, 1.0, 1.0, 1.0, 0.25).is_ok());
        assert!(Params::new(1.0, -2.0, 1.0, 1.0, 1.0, 0.25).is_err());
        assert!(Params::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn nu_definition() {
        let p = Params::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.25).unwrap();
        assert_eq!(p.nu(), 3.0);
        assert_eq!(p.stiffest_coefficient(), 3.0);
    }

    #[test]
    fn unit_gas_required_for_perturbation_side() {
        let p = Params::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.25).unwrap();
        assert!(p.require_unit_gas().is_err());
    }
}
