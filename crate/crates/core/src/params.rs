//! Fluid constants and the gamma-law pressure.

use crate::error::{Error, Result};

/// Constants of the isentropic gamma-law fluid.
///
/// `lambda` is the single effective viscosity that survives the reduction
/// to one space dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    a: f64,
    gamma: f64,
    lambda: f64,
}

impl FluidParams {
    pub fn new(a: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("A must be > 0, got {a}")));
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be > 1, got {gamma}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(Self { a, gamma, lambda })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `A rho^gamma`, without the sign check of [`pressure`].
    #[inline]
    pub(crate) fn p(&self, rho: f64) -> f64 {
        self.a * rho.powf(self.gamma)
    }

    /// Sound speed `sqrt(gamma P(rho) / rho)`.
    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.gamma * self.a * rho.powf(self.gamma - 1.0)).sqrt()
    }

    /// Internal energy density `A/(gamma-1) rho^gamma`.
    #[inline]
    pub fn internal_energy(&self, rho: f64) -> f64 {
        self.p(rho) / (self.gamma - 1.0)
    }
}

impl Default for FluidParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            gamma: 1.4,
            lambda: 1.0,
        }
    }
}

/// Gamma-law pressure `P(rho) = A rho^gamma`.
pub fn pressure(rho: f64, params: &FluidParams) -> Result<f64> {
    if rho < 0.0 || rho.is_nan() {
        return Err(Error::Domain(format!("pressure of negative density {rho}")));
    }
    Ok(params.p(rho))
}
