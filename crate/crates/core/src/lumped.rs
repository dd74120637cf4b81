//! Zero-dimensional temperature models of the compressed web.
//!
//! Three families share one integrator:
//!
//! - adiabatic heating by compression work, with strain as the abscissa;
//! - the same heating plus conductive loss to the rollers, compressed at a
//!   constant speed `v = 2 h_min (1 - r) / dt`;
//! - the roller-kinematics model, where strain and strain rate follow the
//!   nip geometry, written either in physical time or in scaled time
//!   `tau = t / dt`.
//!
//! The right-hand sides are kept in the printed lumped forms: the heating
//! term is `s kappa(s, T) / (Cp w)` and the roller loss is
//! `4 K_steel (T_steel - T) / (h (1 - s) Cp w)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrators::{integrate_adaptive, SolverStats, StepControl};
use crate::kinematics::{CompressionSchedule, RollerSetup};
use crate::materials::MaterialParams;
use crate::stiffness::{StiffnessModel, POLE_MARGIN};

/// Default number of output samples per trace.
pub const DEFAULT_OUTPUT_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum LumpedMode {
    /// No heat loss; integrate in strain over `[0, strain_end]`.
    AdiabaticInStrain { strain_end: f64 },
    /// Heating plus roller loss at constant compression speed; integrate in
    /// strain over `[0, 1 - r]`.
    ConstantSpeedInStrain {
        /// Duration of the compression, s.
        compression_time: f64,
        compression_ratio: f64,
    },
    /// Roller kinematics in scaled time over `[0, 1]`.
    RollerScaledTime { setup: RollerSetup },
    /// Roller kinematics in physical time over `[0, dt]`.
    RollerPhysicalTime { setup: RollerSetup },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Abscissa {
    Strain,
    ScaledTime,
    Time,
}

impl Abscissa {
    pub fn label(&self) -> &'static str {
        match self {
            Abscissa::Strain => "strain",
            Abscissa::ScaledTime => "tau",
            Abscissa::Time => "time_s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LumpedScenario {
    pub materials: MaterialParams,
    pub stiffness: StiffnessModel,
    pub mode: LumpedMode,
}

/// The two additive parts of dT/d(abscissa).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RhsTerms {
    pub heating: f64,
    pub flux: f64,
}

impl RhsTerms {
    pub fn total(&self) -> f64 {
        self.heating + self.flux
    }
}

impl LumpedScenario {
    pub fn new(materials: MaterialParams, stiffness: StiffnessModel, mode: LumpedMode) -> Self {
        LumpedScenario { materials, stiffness, mode }
    }

    pub fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        self.stiffness.validate()?;
        match self.mode {
            LumpedMode::AdiabaticInStrain { strain_end } => {
                if !(strain_end > 0.0 && strain_end < 0.5 - POLE_MARGIN) {
                    return Err(Error::validation(
                        "lumped.strain_end",
                        "must lie in (0, 0.5) to stay below the stiffness pole",
                    ));
                }
            }
            LumpedMode::ConstantSpeedInStrain { compression_time, compression_ratio } => {
                if !(compression_time > 0.0 && compression_time.is_finite()) {
                    return Err(Error::validation(
                        "lumped.compression_time_s",
                        "must be strictly positive",
                    ));
                }
                if !(compression_ratio > 0.5 && compression_ratio < 1.0) {
                    return Err(Error::validation(
                        "roller.compression_ratio",
                        format!("compression ratio must satisfy 0.5 < r < 1, got {compression_ratio}"),
                    ));
                }
            }
            LumpedMode::RollerScaledTime { setup } | LumpedMode::RollerPhysicalTime { setup } => {
                setup.validate()?;
            }
        }
        Ok(())
    }

    pub fn abscissa(&self) -> Abscissa {
        match self.mode {
            LumpedMode::AdiabaticInStrain { .. } | LumpedMode::ConstantSpeedInStrain { .. } => {
                Abscissa::Strain
            }
            LumpedMode::RollerScaledTime { .. } => Abscissa::ScaledTime,
            LumpedMode::RollerPhysicalTime { .. } => Abscissa::Time,
        }
    }

    /// Constant compression speed `2 h_min (1 - r) / dt`, m/s, for the
    /// constant-speed mode.
    pub fn compression_speed(&self) -> Option<f64> {
        match self.mode {
            LumpedMode::ConstantSpeedInStrain { compression_time, compression_ratio } => {
                Some(2.0 * self.materials.h_min * (1.0 - compression_ratio) / compression_time)
            }
            _ => None,
        }
    }

    fn schedule(&self) -> Result<Option<CompressionSchedule>> {
        match self.mode {
            LumpedMode::RollerScaledTime { setup } | LumpedMode::RollerPhysicalTime { setup } => {
                Ok(Some(CompressionSchedule::new(setup)?))
            }
            _ => Ok(None),
        }
    }

    /// End of the integration interval in the mode's abscissa.
    pub fn abscissa_end(&self) -> Result<f64> {
        Ok(match self.mode {
            LumpedMode::AdiabaticInStrain { strain_end } => strain_end,
            LumpedMode::ConstantSpeedInStrain { compression_ratio, .. } => 1.0 - compression_ratio,
            LumpedMode::RollerScaledTime { .. } => 1.0,
            LumpedMode::RollerPhysicalTime { setup } => CompressionSchedule::new(setup)?.delta_t,
        })
    }

    /// `n` uniform samples covering the whole interval.
    pub fn uniform_points(&self, n: usize) -> Result<Vec<f64>> {
        let end = self.abscissa_end()?;
        Ok(crate::thickness_fit::linspace(0.0, end, n))
    }

    /// Strain at abscissa value `x`.
    fn strain_at(&self, schedule: Option<&CompressionSchedule>, x: f64) -> f64 {
        match (self.mode, schedule) {
            (LumpedMode::RollerScaledTime { .. }, Some(s)) => s.scaled(x).strain,
            (LumpedMode::RollerPhysicalTime { .. }, Some(s)) => s.physical(x).0,
            _ => x,
        }
    }

    fn terms_with(&self, schedule: Option<&CompressionSchedule>, x: f64, temperature: f64) -> Result<RhsTerms> {
        let m = &self.materials;
        let capacity = m.areal_heat_capacity();
        let roller_loss = |strain: f64| {
            4.0 * m.k_steel * (m.t_steel - temperature) / (m.h_min * (1.0 - strain))
        };
        match (self.mode, schedule) {
            (LumpedMode::AdiabaticInStrain { .. }, _) => Ok(RhsTerms {
                heating: self.stiffness.pressure(x, temperature)? / capacity,
                flux: 0.0,
            }),
            (LumpedMode::ConstantSpeedInStrain { .. }, _) => {
                if !(x < 1.0) {
                    return Err(Error::validation("strain", "flux term diverges as s -> 1"));
                }
                let speed = self.compression_speed().unwrap_or(f64::NAN);
                Ok(RhsTerms {
                    heating: self.stiffness.pressure(x, temperature)? / capacity,
                    flux: 4.0 * m.k_steel * (m.t_steel - temperature) / (speed * (1.0 - x)) / capacity,
                })
            }
            (LumpedMode::RollerScaledTime { .. }, Some(s)) => {
                let k = s.scaled(x);
                let scale = s.delta_t / capacity;
                Ok(RhsTerms {
                    heating: scale * k.strain_rate * self.stiffness.pressure(k.strain, temperature)?,
                    flux: scale * roller_loss(k.strain),
                })
            }
            (LumpedMode::RollerPhysicalTime { .. }, Some(s)) => {
                let (strain, rate) = s.physical(x);
                Ok(RhsTerms {
                    heating: rate * self.stiffness.pressure(strain, temperature)? / capacity,
                    flux: roller_loss(strain) / capacity,
                })
            }
            _ => unreachable!("roller modes always carry a schedule"),
        }
    }

    /// Both parts of dT/d(abscissa) at `(x, temperature)`.
    pub fn rhs_terms(&self, x: f64, temperature: f64) -> Result<RhsTerms> {
        let schedule = self.schedule()?;
        self.terms_with(schedule.as_ref(), x, temperature)
    }
}

/// dT/ds without heat loss, °C per unit strain.
pub fn rhs_adiabatic(s: f64, temperature: f64, scenario: &LumpedScenario) -> Result<f64> {
    let capacity = scenario.materials.areal_heat_capacity();
    Ok(scenario.stiffness.pressure(s, temperature)? / capacity)
}

/// dT/ds with roller loss at constant compression speed. Requires the
/// constant-speed mode.
pub fn rhs_constant_speed(s: f64, temperature: f64, scenario: &LumpedScenario) -> Result<f64> {
    match scenario.mode {
        LumpedMode::ConstantSpeedInStrain { .. } => Ok(scenario.rhs_terms(s, temperature)?.total()),
        _ => Err(Error::validation("mode", "constant-speed right-hand side needs the constant-speed mode")),
    }
}

/// dT/dtau for the roller-kinematics model in scaled time.
pub fn rhs_roller_scaled(tau: f64, temperature: f64, scenario: &LumpedScenario) -> Result<f64> {
    match scenario.mode {
        LumpedMode::RollerScaledTime { .. } => Ok(scenario.rhs_terms(tau, temperature)?.total()),
        _ => Err(Error::validation("mode", "scaled-time right-hand side needs the roller scaled-time mode")),
    }
}

/// dT/dt for the roller-kinematics model in physical time.
pub fn rhs_roller_physical(t: f64, temperature: f64, scenario: &LumpedScenario) -> Result<f64> {
    match scenario.mode {
        LumpedMode::RollerPhysicalTime { .. } => Ok(scenario.rhs_terms(t, temperature)?.total()),
        _ => Err(Error::validation("mode", "physical-time right-hand side needs the roller physical-time mode")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub abscissa: f64,
    pub strain: f64,
    pub temperature: f64,
    pub heating_term: f64,
    pub flux_term: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TemperatureTrace {
    pub abscissa: Abscissa,
    pub samples: Vec<TraceSample>,
    pub scenario: LumpedScenario,
    pub stats: SolverStats,
}

impl TemperatureTrace {
    pub fn peak_temperature(&self) -> f64 {
        self.samples.iter().map(|s| s.temperature).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn final_temperature(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.temperature)
    }

    pub fn temperatures(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.temperature).collect()
    }
}

/// Integrates the scenario from `T(0) = T_ambient` and samples it at
/// `output_points` (ascending, inside the mode's interval).
pub fn run_lumped(
    scenario: &LumpedScenario,
    output_points: &[f64],
    control: &StepControl,
) -> Result<TemperatureTrace> {
    scenario.validate()?;
    let end = scenario.abscissa_end()?;
    let schedule = scenario.schedule()?;
    let schedule = schedule.as_ref();
    let solution = integrate_adaptive(
        |x, y: &[f64], dy: &mut [f64]| {
            dy[0] = scenario.terms_with(schedule, x, y[0])?.total();
            Ok(())
        },
        (0.0, end),
        &[scenario.materials.t_ambient],
        control,
        output_points,
    )?;
    let mut samples = Vec::with_capacity(solution.points.len());
    for (&x, state) in solution.points.iter().zip(&solution.states) {
        let temperature = state[0];
        let terms = scenario.terms_with(schedule, x, temperature)?;
        samples.push(TraceSample {
            abscissa: x,
            strain: scenario.strain_at(schedule, x),
            temperature,
            heating_term: terms.heating,
            flux_term: terms.flux,
        });
    }
    Ok(TemperatureTrace {
        abscissa: scenario.abscissa(),
        samples,
        scenario: *scenario,
        stats: solution.stats,
    })
}
