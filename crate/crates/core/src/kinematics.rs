//! Roller geometry and the compression schedule.
//!
//! The web enters the nip fully compacted at thickness `h_min` and is squeezed
//! to the gap `r * h_min` while the rollers turn through the contact angle
//! `theta0`. Scaled time `tau = t / delta_t` maps the contact phase onto
//! `[0, 1]`; past `tau = 1` the strain stays at `1 - r` and the strain rate is
//! zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RollerSetup {
    /// Roller radius, m.
    pub radius: f64,
    /// Line speed of the web, m/s.
    pub line_speed: f64,
    /// Nip gap over compacted thickness.
    pub compression_ratio: f64,
    /// Compacted web thickness, m.
    pub h_min: f64,
}

impl RollerSetup {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("roller.radius_m", self.radius),
            ("roller.line_speed_m_s", self.line_speed),
            ("materials.h_min", self.h_min),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(field, "must be finite and strictly positive"));
            }
        }
        let r = self.compression_ratio;
        if !(r > 0.5 && r < 1.0) {
            return Err(Error::validation(
                "roller.compression_ratio",
                format!(
                    "compression ratio must satisfy 0.5 < r < 1 (r > 0.5 keeps the peak strain 1 - r below the stiffness pole), got {r}"
                ),
            ));
        }
        Ok(())
    }
}

/// Roller angular velocity `v / R`, rad/s.
pub fn angular_velocity(setup: &RollerSetup) -> f64 {
    setup.line_speed / setup.radius
}

/// Small-angle contact angle `sqrt(h_min (1 - r) / R)`, rad.
pub fn contact_angle(setup: &RollerSetup) -> f64 {
    (setup.h_min * (1.0 - setup.compression_ratio) / setup.radius).sqrt()
}

/// Contact angle from the exact chord relation
/// `cos(theta0) = 1 - h_min (1 - r) / (2R)`.
pub fn contact_angle_exact(setup: &RollerSetup) -> f64 {
    (1.0 - setup.h_min * (1.0 - setup.compression_ratio) / (2.0 * setup.radius)).acos()
}

/// Duration of the contact phase, s.
pub fn bonding_time(setup: &RollerSetup) -> f64 {
    contact_angle(setup) / angular_velocity(setup)
}

/// Closed form of [`bonding_time`]: `sqrt(R (1 - r) h_min) / v`.
pub fn bonding_time_closed_form(setup: &RollerSetup) -> f64 {
    (setup.radius * (1.0 - setup.compression_ratio) * setup.h_min).sqrt() / setup.line_speed
}

/// Kinematic state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSample {
    /// Roller angle, rad (negative before the nip centre).
    pub theta: f64,
    pub strain: f64,
    /// ds/dt, 1/s.
    pub strain_rate: f64,
    /// Web thickness `h_min (1 - s)`, m.
    pub thickness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompressionSchedule {
    pub setup: RollerSetup,
    pub omega: f64,
    pub theta0: f64,
    pub delta_t: f64,
}

impl CompressionSchedule {
    pub fn new(setup: RollerSetup) -> Result<Self> {
        setup.validate()?;
        let omega = angular_velocity(&setup);
        let theta0 = contact_angle(&setup);
        Ok(CompressionSchedule {
            setup,
            omega,
            theta0,
            delta_t: theta0 / omega,
        })
    }

    pub fn max_strain(&self) -> f64 {
        1.0 - self.setup.compression_ratio
    }

    /// State at scaled time `tau >= 0`.
    pub fn scaled(&self, tau: f64) -> ScheduleSample {
        let spread = self.max_strain();
        if tau <= 1.0 {
            let strain = spread * tau * (2.0 - tau);
            ScheduleSample {
                theta: (tau - 1.0) * self.theta0,
                strain,
                strain_rate: 2.0 / self.theta0 * self.omega * spread * (1.0 - tau),
                thickness: self.setup.h_min * (1.0 - strain),
            }
        } else {
            ScheduleSample {
                theta: (tau - 1.0) * self.theta0,
                strain: spread,
                strain_rate: 0.0,
                thickness: self.setup.h_min * self.setup.compression_ratio,
            }
        }
    }

    /// Strain and strain rate (1/s) at physical time `t >= 0`.
    pub fn physical(&self, t: f64) -> (f64, f64) {
        if t >= self.delta_t {
            return (self.max_strain(), 0.0);
        }
        let lag = self.omega * t - self.theta0;
        let geometry = self.setup.radius / self.setup.h_min;
        let strain = self.max_strain() - geometry * lag * lag;
        let rate = 2.0 * geometry * self.omega * (self.theta0 - self.omega * t);
        (strain, rate)
    }
}
