//! Heat generation in nonwoven polypropylene webs bonded between steel
//! calender rollers.
//!
//! Modules, bottom up:
//!
//! - [`materials`]: physical constants and derived fabric quantities
//! - [`stiffness`]: strain- and temperature-dependent modulus
//! - [`thickness_fit`]: dynamometer pressure fits and the single-sheet curve
//! - [`kinematics`]: roller geometry and compression schedule
//! - [`integrators`]: adaptive Runge–Kutta and tridiagonal kernels
//! - [`lumped`]: zero-dimensional heating/cooling ODE models
//! - [`parabolic`]: 1-D through-thickness heat model
//! - [`config`] and [`report`]: scenario files, sweeps and CSV output
//!
//! Every capability has a runnable example:
//!
//! ```text
//! cargo run -p bondsim --example material_constants
//! cargo run -p bondsim --example stiffness_laws
//! cargo run -p bondsim --example single_sheet_curve
//! cargo run -p bondsim --example roller_kinematics
//! cargo run -p bondsim --example adiabatic_heating
//! cargo run -p bondsim --example flux_cooling
//! cargo run -p bondsim --example roller_heating
//! cargo run -p bondsim --example parabolic_profile
//! cargo run -p bondsim --example bonding_map
//! cargo run -p bondsim --example scenario_file
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod integrators;
pub mod kinematics;
pub mod lumped;
pub mod materials;
pub mod parabolic;
pub mod report;
mod roots;
pub mod stiffness;
pub mod thickness_fit;

pub use error::{Error, Result};
pub use kinematics::{CompressionSchedule, RollerSetup};
pub use lumped::{LumpedMode, LumpedScenario, TemperatureTrace};
pub use materials::{default_params, MaterialParams};
pub use parabolic::{Grid, ParabolicModel, ParabolicOptions, ParabolicRun, Phase, TemperatureField};
pub use roots::{find_root, Root, RootOptions};
pub use stiffness::{Softening, StiffnessModel};
