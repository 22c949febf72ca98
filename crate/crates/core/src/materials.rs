//! Power-law thermal properties below 1 K.
//!
//! Both laws have the form `a·T^p`, so the Kirchhoff potential
//! `u(T) = ∫₀ᵀ k(T′) dT′` and its inverse are available in closed form. The
//! heat solver works in `u`, which turns the conductivity nonlinearity into a
//! linear operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temperature-dependent conductivity `k = a_k·T^p_k`, specific heat
/// `c = a_c·T^q_c` and constant density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    pub name: String,
    /// W·m⁻¹·K⁻¹⁻ᵖ
    pub conductivity_coeff: f64,
    pub conductivity_exp: f64,
    /// J·kg⁻¹·K⁻¹⁻ᵠ
    pub heat_capacity_coeff: f64,
    pub heat_capacity_exp: f64,
    /// kg·m⁻³
    pub density: f64,
    /// Upper end of the fitted regime (K); evaluations above it are extrapolations.
    pub valid_max_temp: f64,
    /// Residual resistance ratio, informational only.
    #[serde(default)]
    pub rrr: Option<f64>,
}

impl MaterialModel {
    /// Lithium niobate: `k = 4·T³`, `c = 2.705e-4·T³`, ρ = 4640 kg/m³.
    pub fn linbo3() -> Self {
        MaterialModel {
            name: "linbo3".into(),
            conductivity_coeff: 4.0,
            conductivity_exp: 3.0,
            heat_capacity_coeff: 2.705e-4,
            heat_capacity_exp: 3.0,
            density: 4640.0,
            valid_max_temp: 1.0,
            rrr: None,
        }
    }

    /// Copper: `k = 500·T` (RRR 100), `c = 0.01·T` (RRR 30), ρ = 8960 kg/m³.
    pub fn copper() -> Self {
        MaterialModel {
            name: "copper".into(),
            conductivity_coeff: 500.0,
            conductivity_exp: 1.0,
            heat_capacity_coeff: 0.01,
            heat_capacity_exp: 1.0,
            density: 8960.0,
            valid_max_temp: 1.0,
            rrr: Some(100.0),
        }
    }

    /// Looks up one of the built-in materials by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "linbo3" | "LiNbO3" => Some(Self::linbo3()),
            "copper" | "Cu" => Some(Self::copper()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.conductivity_coeff > 0.0
            && self.heat_capacity_coeff > 0.0
            && self.density > 0.0
            && self.conductivity_exp >= 0.0
            && self.heat_capacity_exp >= 0.0
            && self.valid_max_temp > 0.0
            && [
                self.conductivity_coeff,
                self.conductivity_exp,
                self.heat_capacity_coeff,
                self.heat_capacity_exp,
                self.density,
            ]
            .iter()
            .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "material `{}` needs positive coefficients and density and non-negative exponents",
                self.name
            )))
        }
    }

    fn check_temperature(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTemperature(t));
        }
        if t > self.valid_max_temp {
            log::warn!("{}: {t} K is above the fitted range (≤ {} K); extrapolating", self.name, self.valid_max_temp);
        }
        Ok(())
    }

    /// Thermal conductivity (W·m⁻¹·K⁻¹).
    pub fn conductivity(&self, t: f64) -> Result<f64> {
        self.check_temperature(t)?;
        Ok(self.k(t))
    }

    /// Heat capacity per unit volume, `ρ·c(T)` (J·m⁻³·K⁻¹).
    pub fn volumetric_heat_capacity(&self, t: f64) -> Result<f64> {
        self.check_temperature(t)?;
        Ok(self.rho_c(t))
    }

    /// `u(T) = a_k·T^(p+1)/(p+1)` (W/m).
    pub fn kirchhoff_potential(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTemperature(t));
        }
        Ok(self.potential(t))
    }

    /// Temperature whose Kirchhoff potential is `u`.
    pub fn kirchhoff_inverse(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::NegativePotential(u));
        }
        Ok(self.temperature(u))
    }

    // Unchecked kernels used by the solver, which guarantees T, u > 0 itself.

    pub(crate) fn k(&self, t: f64) -> f64 {
        self.conductivity_coeff * t.powf(self.conductivity_exp)
    }

    pub(crate) fn rho_c(&self, t: f64) -> f64 {
        self.density * self.heat_capacity_coeff * t.powf(self.heat_capacity_exp)
    }

    pub(crate) fn potential(&self, t: f64) -> f64 {
        let e = self.conductivity_exp + 1.0;
        self.conductivity_coeff * t.powf(e) / e
    }

    pub(crate) fn temperature(&self, u: f64) -> f64 {
        let e = self.conductivity_exp + 1.0;
        (e * u / self.conductivity_coeff).powf(1.0 / e)
    }

    /// Stored heat per unit volume above 0 K, `∫₀ᵀ ρc dT′` (J/m³).
    pub(crate) fn enthalpy(&self, t: f64) -> f64 {
        let e = self.heat_capacity_exp + 1.0;
        self.density * self.heat_capacity_coeff * t.powf(e) / e
    }

    /// `dE/du = ρc(T)/k(T)`, evaluated without forming 0/0 at T = 0.
    pub(crate) fn capacity_per_conductivity(&self, t: f64) -> f64 {
        self.density * self.heat_capacity_coeff / self.conductivity_coeff
            * t.powf(self.heat_capacity_exp - self.conductivity_exp)
    }
}

/// The two materials a device may contain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Materials {
    pub dielectric: MaterialModel,
    pub copper: MaterialModel,
}

impl Default for Materials {
    fn default() -> Self {
        Materials { dielectric: MaterialModel::linbo3(), copper: MaterialModel::copper() }
    }
}

impl Materials {
    pub fn get(&self, slot: MaterialSlot) -> &MaterialModel {
        match slot {
            MaterialSlot::Dielectric => &self.dielectric,
            MaterialSlot::Copper => &self.copper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaterialSlot {
    Dielectric,
    Copper,
}
