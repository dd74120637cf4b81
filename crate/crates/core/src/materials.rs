//! Physical constants of the polypropylene web and the steel rollers.
//!
//! Temperatures are in °C everywhere. Specific heat and conductivity carry
//! kelvin in their units, which is harmless because only temperature
//! differences enter the models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fabric, polypropylene and steel constants.
///
/// Deserialization fills any missing key from [`default_params`], so a
/// scenario file only needs to list what it changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialParams {
    /// Ambient temperature and initial fabric temperature, °C.
    pub t_ambient: f64,
    /// Temperature at which the linear softening law reaches zero stiffness, °C.
    pub t_max_linear: f64,
    /// Temperature at which the quadratic softening law reaches zero stiffness, °C.
    pub t_max_quadratic: f64,
    /// Specific heat of the fabric, J/(kg·K).
    pub cp_fabric: f64,
    /// Areal density, kg/m².
    pub w_fabric: f64,
    /// Fully compressed thickness, m.
    pub h_min: f64,
    /// Uncompressed thickness, m. Informational only.
    pub h_max: Option<f64>,
    /// Fabric thermal conductivity, W/(m·K).
    pub k_fabric: f64,
    /// Steel thermal conductivity, W/(m·K).
    pub k_steel: f64,
    /// Roller surface temperature, °C.
    pub t_steel: f64,
    /// Polypropylene density, kg/m³.
    pub rho_pp: f64,
    /// Stiffness of the fully compressed fabric at zero strain, Pa.
    pub kappa0: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        default_params()
    }
}

/// Baseline constants for the calender bonding line.
///
/// `k_steel` is the lumped-model value (50); the parabolic presets set 17.
/// The rollers are unheated, so `t_steel` equals the ambient temperature.
pub fn default_params() -> MaterialParams {
    MaterialParams {
        t_ambient: 20.0,
        t_max_linear: 90.0,
        t_max_quadratic: 160.0,
        cp_fabric: 1800.0,
        w_fabric: 0.0126,
        h_min: 14e-6,
        h_max: Some(97e-6),
        k_fabric: 0.17,
        k_steel: 50.0,
        t_steel: 20.0,
        rho_pp: 900.0,
        kappa0: 16e6,
    }
}

/// Mass per unit area of a rectangular sample, kg/m².
pub fn areal_density(mass: f64, side_a: f64, side_b: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("side_a", side_a)?;
    require_positive("side_b", side_b)?;
    Ok(mass / (side_a * side_b))
}

/// Thickness of a fully compacted web, m: areal density over bulk density.
pub fn min_thickness(areal: f64, density: f64) -> Result<f64> {
    require_positive("areal", areal)?;
    require_positive("density", density)?;
    Ok(areal / density)
}

impl MaterialParams {
    /// Heat capacity per unit area, J/(m²·K).
    pub fn areal_heat_capacity(&self) -> f64 {
        self.cp_fabric * self.w_fabric
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("materials.cp_fabric", self.cp_fabric),
            ("materials.w_fabric", self.w_fabric),
            ("materials.h_min", self.h_min),
            ("materials.k_fabric", self.k_fabric),
            ("materials.k_steel", self.k_steel),
            ("materials.rho_pp", self.rho_pp),
            ("materials.kappa0", self.kappa0),
        ];
        for (field, value) in positive {
            require_positive(field, value)?;
        }
        for (field, value) in [
            ("materials.t_ambient", self.t_ambient),
            ("materials.t_max_linear", self.t_max_linear),
            ("materials.t_max_quadratic", self.t_max_quadratic),
            ("materials.t_steel", self.t_steel),
        ] {
            if !value.is_finite() {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        if self.t_max_linear <= self.t_ambient {
            return Err(Error::validation(
                "materials.t_max_linear",
                "must exceed t_ambient (T_ambient < T_max^L < T_max^Q)",
            ));
        }
        if self.t_max_quadratic <= self.t_max_linear {
            return Err(Error::validation(
                "materials.t_max_quadratic",
                "must exceed t_max_linear (T_ambient < T_max^L < T_max^Q)",
            ));
        }
        if let Some(h_max) = self.h_max {
            if !(h_max.is_finite() && h_max > self.h_min) {
                return Err(Error::validation(
                    "materials.h_max",
                    "must exceed h_min when set",
                ));
            }
        }
        Ok(())
    }
}

fn require_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be finite and strictly positive, got {value}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn areal_density_examples() {
        // 0.2835 g over a 15 cm square.
        assert!(close(areal_density(0.0002835, 0.15, 0.15).unwrap(), 0.0126, 1e-12));
        assert_eq!(areal_density(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(areal_density(0.5, 2.0, 0.25).unwrap(), 1.0);
    }

    #[test]
    fn areal_density_rejects_non_positive() {
        for (m, a, b) in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, f64::NAN)] {
            assert!(matches!(
                areal_density(m, a, b),
                Err(Error::Validation { .. })
            ));
        }
    }

    #[test]
    fn min_thickness_examples() {
        assert!(close(min_thickness(0.0126, 900.0).unwrap(), 1.4e-5, 1e-12));
        assert_eq!(min_thickness(1.0, 1.0).unwrap(), 1.0);
        assert!(close(min_thickness(0.0126, 866.0).unwrap(), 1.455e-5, 1e-3));
        assert!(min_thickness(0.0126, 0.0).is_err());
    }

    #[test]
    fn defaults_are_valid() {
        let p = default_params();
        assert_eq!(p.cp_fabric, 1800.0);
        assert_eq!(p.k_steel, 50.0);
        assert_eq!(p.t_steel, p.t_ambient);
        p.validate().unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let mut p = default_params();
        p.w_fabric = 0.0;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("materials.w_fabric"), "{err}");

        let mut p = default_params();
        p.t_max_linear = 170.0;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("t_max_quadratic"), "{err}");

        let mut p = default_params();
        p.h_max = Some(1e-6);
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("materials.h_max"), "{err}");
    }

    #[test]
    fn defaults_round_trip_through_toml() {
        let p = default_params();
        let text = toml::to_string(&p).unwrap();
        let back: MaterialParams = toml::from_str(&text).unwrap();
        assert_eq!(p, back);
        for (a, b) in [(p.h_min, back.h_min), (p.kappa0, back.kappa0)] {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn missing_keys_take_defaults() {
        let p: MaterialParams = toml::from_str("k_steel = 17.0").unwrap();
        assert_eq!(p.k_steel, 17.0);
        assert_eq!(p.cp_fabric, 1800.0);
    }
}
