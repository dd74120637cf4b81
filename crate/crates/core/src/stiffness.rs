//! Strain- and temperature-dependent stiffness of the compacted web.
//!
//! The room-temperature modulus follows the hyperbolic fit
//! `kappa0 / (1 - 2s)`. Heating softens it, either linearly or
//! quadratically, down to zero at a cutoff temperature; above the cutoff the
//! modulus stays at zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::MaterialParams;

/// Distance from the s = 0.5 pole below which strains are rejected.
pub const POLE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Softening {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StiffnessModel {
    pub variant: Softening,
    /// Temperature at which the modulus vanishes, °C.
    pub cutoff_temperature: f64,
    /// Temperature at which the softening factor is 1, °C.
    pub reference_temperature: f64,
    /// Zero-strain modulus, Pa.
    pub kappa0: f64,
}

/// Fitted modulus of the compacted web at strain `s`, Pa.
pub fn kappa_fabric(s: f64, kappa0: f64) -> Result<f64> {
    if !(s < 0.5 - POLE_MARGIN) {
        return Err(Error::StrainPole { strain: s });
    }
    Ok(kappa0 / (1.0 - 2.0 * s))
}

impl StiffnessModel {
    /// Linear softening reaching zero at `t_max_linear`.
    pub fn linear(materials: &MaterialParams) -> Self {
        StiffnessModel {
            variant: Softening::Linear,
            cutoff_temperature: materials.t_max_linear,
            reference_temperature: materials.t_ambient,
            kappa0: materials.kappa0,
        }
    }

    /// Quadratic softening reaching zero at `t_max_quadratic`.
    pub fn quadratic(materials: &MaterialParams) -> Self {
        StiffnessModel {
            variant: Softening::Quadratic,
            cutoff_temperature: materials.t_max_quadratic,
            reference_temperature: materials.t_ambient,
            kappa0: materials.kappa0,
        }
    }

    pub fn from_variant(variant: Softening, materials: &MaterialParams) -> Self {
        match variant {
            Softening::Linear => Self::linear(materials),
            Softening::Quadratic => Self::quadratic(materials),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_temperature > self.reference_temperature) {
            return Err(Error::validation(
                "stiffness.cutoff_temperature",
                "must exceed the reference temperature",
            ));
        }
        if !(self.kappa0.is_finite() && self.kappa0 >= 0.0) {
            return Err(Error::validation(
                "stiffness.kappa0",
                "must be finite and non-negative",
            ));
        }
        Ok(())
    }

    /// Clamped multiplier: 1 at the reference temperature, 0 at and above
    /// the cutoff. Squared for the quadratic variant.
    pub fn softening(&self, temperature: f64) -> f64 {
        let span = self.cutoff_temperature - self.reference_temperature;
        let linear = ((self.cutoff_temperature - temperature) / span).max(0.0);
        match self.variant {
            Softening::Linear => linear,
            Softening::Quadratic => linear * linear,
        }
    }

    pub fn kappa_fabric(&self, s: f64) -> Result<f64> {
        kappa_fabric(s, self.kappa0)
    }

    /// Modulus at strain `s` and temperature `temperature`, Pa.
    pub fn kappa(&self, s: f64, temperature: f64) -> Result<f64> {
        Ok(self.kappa_fabric(s)? * self.softening(temperature))
    }

    /// Compressive pressure `kappa(s, T) * s`, Pa.
    pub fn pressure(&self, s: f64, temperature: f64) -> Result<f64> {
        Ok(self.kappa(s, temperature)? * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::default_params;
    use proptest::prelude::*;

    fn models() -> (StiffnessModel, StiffnessModel) {
        let m = default_params();
        (StiffnessModel::linear(&m), StiffnessModel::quadratic(&m))
    }

    #[test]
    fn kappa_fabric_values() {
        assert_eq!(kappa_fabric(0.0, 16e6).unwrap(), 16e6);
        assert!((kappa_fabric(0.25, 16e6).unwrap() - 32e6).abs() < 1e-6);
        assert!((kappa_fabric(0.4, 16e6).unwrap() - 80e6).abs() < 1e-4);
        // under-compression is allowed
        assert!(kappa_fabric(-0.5, 16e6).unwrap() > 0.0);
    }

    #[test]
    fn pole_is_an_error() {
        for s in [0.5, 0.5 - 1e-7, 0.7, f64::NAN] {
            let err = kappa_fabric(s, 16e6).unwrap_err();
            assert!(err.to_string().contains("0.5"), "{err}");
        }
        assert!(kappa_fabric(0.5 - 2e-6, 16e6).is_ok());
    }

    #[test]
    fn kappa_examples() {
        let (lin, quad) = models();
        assert_eq!(lin.kappa(0.2, 90.0).unwrap(), 0.0);
        assert!((quad.kappa(0.2, 20.0).unwrap() - 16e6 / 0.6).abs() < 1e-6);
        assert_eq!(quad.kappa(0.1, 200.0).unwrap(), 0.0);
    }

    #[test]
    fn pressure_examples() {
        let (lin, quad) = models();
        assert_eq!(quad.pressure(0.0, 20.0).unwrap(), 0.0);
        assert!((quad.pressure(0.4, 20.0).unwrap() - 32e6).abs() < 1e-4);
        assert_eq!(lin.pressure(0.2, 90.0).unwrap(), 0.0);
        assert_eq!(quad.pressure(0.2, 160.0).unwrap(), 0.0);
    }

    #[test]
    fn reference_temperature_recovers_fit() {
        let (lin, quad) = models();
        for s in [-0.3, 0.0, 0.1, 0.33, 0.45] {
            let k = kappa_fabric(s, 16e6).unwrap();
            assert_eq!(lin.kappa(s, 20.0).unwrap(), k);
            assert_eq!(quad.kappa(s, 20.0).unwrap(), k);
        }
    }

    #[test]
    fn inverted_cutoff_rejected() {
        let (mut lin, _) = models();
        lin.cutoff_temperature = 10.0;
        assert!(lin.validate().is_err());
    }

    proptest! {
        #[test]
        fn kappa_non_negative_and_monotone(s in -1.0f64..0.49, t1 in -50.0f64..300.0, dt in 0.0f64..100.0) {
            let (lin, quad) = models();
            for m in [lin, quad] {
                let a = m.kappa(s, t1).unwrap();
                let b = m.kappa(s, t1 + dt).unwrap();
                prop_assert!(a >= 0.0 && b >= 0.0);
                prop_assert!(b <= a);
            }
        }

        #[test]
        fn zero_at_and_above_cutoff(s in -1.0f64..0.49, excess in 0.0f64..500.0) {
            let (lin, quad) = models();
            for m in [lin, quad] {
                prop_assert_eq!(m.kappa(s, m.cutoff_temperature + excess).unwrap(), 0.0);
            }
        }

        #[test]
        fn quadratic_below_linear_for_equal_cutoff(s in 0.0f64..0.49, t in 20.0f64..200.0) {
            let (lin, quad) = models();
            let quad = StiffnessModel { cutoff_temperature: lin.cutoff_temperature, ..quad };
            prop_assert!(quad.kappa(s, t).unwrap() <= lin.kappa(s, t).unwrap());
        }
    }
}
