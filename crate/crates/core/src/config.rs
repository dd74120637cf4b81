//! Scenario files.
//!
//! One TOML file describes one scenario. Every section is optional and
//! unknown keys are rejected:
//!
//! ```toml
//! [scenario]
//! name = "standard"
//! model = "parabolic"        # adiabatic | constant_speed | roller | roller_physical | parabolic
//!
//! [materials]                # any MaterialParams field
//! k_fabric = 0.17
//!
//! [stiffness]
//! variant = "quadratic"      # linear | quadratic
//!
//! [roller]
//! radius_m = 0.2
//! line_speed_m_s = 6.0
//! compression_ratio = 0.8
//!
//! [lumped]
//! strain_end = 0.4
//! compression_time_s = 1e-3
//! output_points = 512
//!
//! [parabolic]
//! grid_n = 100
//! tau_step = 1e-3
//! tau_end = 40.0
//! bond_threshold_c = 150.0
//! reference_homogenized_c = [25.0, 55.0]
//!
//! [integrator]
//! rel_tol = 1e-8
//! ```
//!
//! A sweep file holds a `[sweep]` table naming a base scenario; its other
//! sections are merged key by key over the base before parsing.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::StepControl;
use crate::kinematics::RollerSetup;
use crate::lumped::{LumpedMode, LumpedScenario, DEFAULT_OUTPUT_POINTS};
use crate::materials::MaterialParams;
use crate::parabolic::{Grid, ParabolicModel, ParabolicOptions};
use crate::stiffness::{Softening, StiffnessModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Adiabatic,
    ConstantSpeed,
    Roller,
    RollerPhysical,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub name: String,
    pub model: ModelKind,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection { name: "scenario".into(), model: ModelKind::Parabolic }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StiffnessSection {
    pub variant: Softening,
    /// Overrides the variant's cutoff from `[materials]`, °C.
    pub cutoff_temperature: Option<f64>,
    /// Overrides `materials.kappa0`, Pa. Zero switches the source off.
    pub kappa0: Option<f64>,
}

impl Default for StiffnessSection {
    fn default() -> Self {
        StiffnessSection { variant: Softening::Quadratic, cutoff_temperature: None, kappa0: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RollerSection {
    pub radius_m: f64,
    pub line_speed_m_s: f64,
    pub compression_ratio: f64,
}

impl Default for RollerSection {
    fn default() -> Self {
        RollerSection { radius_m: 0.2, line_speed_m_s: 6.0, compression_ratio: 0.8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LumpedSection {
    /// End strain of the adiabatic model.
    pub strain_end: f64,
    /// Compression time of the constant-speed model, s.
    pub compression_time_s: f64,
    pub output_points: usize,
}

impl Default for LumpedSection {
    fn default() -> Self {
        LumpedSection { strain_end: 0.4, compression_time_s: 1e-3, output_points: DEFAULT_OUTPUT_POINTS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParabolicSection {
    pub grid_n: usize,
    pub tau_step: f64,
    pub tau_end: f64,
    pub snapshot_taus: Vec<f64>,
    pub bond_threshold_c: f64,
    /// Expected range of the homogenized temperature, °C. A result outside
    /// it is reported in the run manifest.
    pub reference_homogenized_c: Option<[f64; 2]>,
}

impl Default for ParabolicSection {
    fn default() -> Self {
        let options = ParabolicOptions::default();
        ParabolicSection {
            grid_n: 100,
            tau_step: options.tau_step,
            tau_end: options.tau_end,
            snapshot_taus: options.snapshot_taus,
            bond_threshold_c: 150.0,
            reference_homogenized_c: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    Parabolic,
    LumpedRoller,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Base scenario, relative to the sweep file.
    #[serde(default)]
    pub base: Option<PathBuf>,
    pub r_values: Vec<f64>,
    pub v_values: Vec<f64>,
    #[serde(default = "default_sweep_model")]
    pub model: SweepModel,
    #[serde(default = "default_bond_threshold")]
    pub bond_threshold_c: f64,
}

fn default_sweep_model() -> SweepModel {
    SweepModel::Parabolic
}

fn default_bond_threshold() -> f64 {
    150.0
}

impl SweepSection {
    pub fn validate(&self, materials: &MaterialParams) -> Result<()> {
        if self.r_values.is_empty() || self.v_values.is_empty() {
            return Err(Error::validation("sweep", "r_values and v_values must be non-empty"));
        }
        if let Some(r) = self.r_values.iter().find(|r| !(**r > 0.5 && **r < 1.0)) {
            return Err(Error::validation(
                "sweep.r_values",
                format!("compression ratio must satisfy 0.5 < r < 1, got {r}"),
            ));
        }
        if let Some(v) = self.v_values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::validation("sweep.v_values", format!("line speed must be positive, got {v}")));
        }
        if !(self.bond_threshold_c <= materials.t_max_quadratic) {
            return Err(Error::validation(
                "sweep.bond_threshold_c",
                "must not exceed the quadratic cutoff temperature",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSection,
    pub materials: MaterialParams,
    pub stiffness: StiffnessSection,
    pub roller: RollerSection,
    pub lumped: LumpedSection,
    pub parabolic: ParabolicSection,
    pub integrator: StepControl,
    pub sweep: Option<SweepSection>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Reads a scenario file, merging a sweep file over its base.
    pub fn load(path: &Path) -> Result<Self> {
        let value = load_merged(path, 0)?;
        let config: ScenarioConfig = value
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config { path: path.to_path_buf(), message: e.to_string() })?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::validation("config", e.to_string()))
    }

    pub fn roller_setup(&self) -> RollerSetup {
        RollerSetup {
            radius: self.roller.radius_m,
            line_speed: self.roller.line_speed_m_s,
            compression_ratio: self.roller.compression_ratio,
            h_min: self.materials.h_min,
        }
    }

    pub fn stiffness_model(&self) -> StiffnessModel {
        let mut model = StiffnessModel::from_variant(self.stiffness.variant, &self.materials);
        if let Some(cutoff) = self.stiffness.cutoff_temperature {
            model.cutoff_temperature = cutoff;
        }
        if let Some(kappa0) = self.stiffness.kappa0 {
            model.kappa0 = kappa0;
        }
        model
    }

    pub fn lumped_scenario(&self) -> Result<LumpedScenario> {
        let mode = match self.scenario.model {
            ModelKind::Adiabatic => LumpedMode::AdiabaticInStrain { strain_end: self.lumped.strain_end },
            ModelKind::ConstantSpeed => LumpedMode::ConstantSpeedInStrain {
                compression_time: self.lumped.compression_time_s,
                compression_ratio: self.roller.compression_ratio,
            },
            ModelKind::Roller => LumpedMode::RollerScaledTime { setup: self.roller_setup() },
            ModelKind::RollerPhysical => LumpedMode::RollerPhysicalTime { setup: self.roller_setup() },
            ModelKind::Parabolic => {
                return Err(Error::validation("scenario.model", "parabolic is not a lumped model"))
            }
        };
        let scenario = LumpedScenario::new(self.materials, self.stiffness_model(), mode);
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn parabolic_model(&self) -> Result<ParabolicModel> {
        let mut model = ParabolicModel::new(self.roller_setup(), self.materials, Grid::new(self.parabolic.grid_n)?)?;
        model.stiffness = self.stiffness_model();
        model.validate()?;
        Ok(model)
    }

    pub fn parabolic_options(&self) -> ParabolicOptions {
        ParabolicOptions {
            tau_step: self.parabolic.tau_step,
            tau_end: self.parabolic.tau_end,
            snapshot_taus: self.parabolic.snapshot_taus.clone(),
            ..ParabolicOptions::default()
        }
    }

    /// Checks every rule the selected model depends on.
    pub fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        self.stiffness_model().validate()?;
        self.integrator.validate()?;
        if self.lumped.output_points < 2 {
            return Err(Error::validation("lumped.output_points", "must be at least 2"));
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate(&self.materials)?;
        }
        match self.scenario.model {
            ModelKind::Parabolic => {
                self.parabolic_model()?;
                self.parabolic_options().validate()?;
                if !(self.parabolic.bond_threshold_c <= self.materials.t_max_quadratic) {
                    return Err(Error::validation(
                        "parabolic.bond_threshold_c",
                        "must not exceed the quadratic cutoff temperature",
                    ));
                }
                if let Some([lo, hi]) = self.parabolic.reference_homogenized_c {
                    if !(lo <= hi) {
                        return Err(Error::validation("parabolic.reference_homogenized_c", "must be [low, high]"));
                    }
                }
            }
            _ => {
                self.lumped_scenario()?;
            }
        }
        Ok(())
    }
}

const MAX_BASE_DEPTH: usize = 8;

/// Every section has defaults, so each file must also parse on its own;
/// doing that first keeps line numbers in the error messages.
fn read_value(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    ScenarioConfig::from_toml_str(&text, path)?;
    text.parse::<toml::Table>()
        .map_err(|e| Error::Config { path: path.to_path_buf(), message: e.to_string() })
}

fn load_merged(path: &Path, depth: usize) -> Result<toml::Table> {
    if depth > MAX_BASE_DEPTH {
        return Err(Error::Config { path: path.to_path_buf(), message: "base files nest too deeply".into() });
    }
    let overlay = read_value(path)?;
    let base = overlay
        .get("sweep")
        .and_then(|s| s.get("base"))
        .and_then(|b| b.as_str())
        .map(|b| path.parent().unwrap_or(Path::new(".")).join(b));
    let Some(base_path) = base else {
        return Ok(overlay);
    };
    let mut merged = load_merged(&base_path, depth + 1)?;
    // a base's own sweep table never leaks into the file that extends it
    merged.remove("sweep");
    merge_tables(&mut merged, overlay);
    Ok(merged)
}

/// Overlays `top` on `base`, recursing into tables.
pub fn merge_tables(base: &mut toml::Table, top: toml::Table) {
    for (key, value) in top {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(inner)), toml::Value::Table(overlay)) => merge_tables(inner, overlay),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::default_params;

    fn parse(text: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::from_toml_str(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_file_is_the_standard_scenario() {
        let cfg = parse("").unwrap();
        assert_eq!(cfg.materials, default_params());
        assert_eq!(cfg.scenario.model, ModelKind::Parabolic);
        assert_eq!(cfg.parabolic.grid_n, 100);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_reports_line_and_field() {
        let err = parse("[scenario]\nmodel = \"roller\"\n\n[roller]\nradius = 0.2\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("line 5"), "{text}");
        assert!(text.contains("radius"), "{text}");
        assert!(err.is_validation());
    }

    #[test]
    fn weak_compression_names_the_rule() {
        for model in ["roller", "parabolic", "constant_speed"] {
            let cfg = parse(&format!("[scenario]\nmodel = \"{model}\"\n[roller]\ncompression_ratio = 0.4\n")).unwrap();
            let err = cfg.validate().unwrap_err();
            assert!(err.to_string().contains("0.5 < r"), "{model}: {err}");
        }
    }

    #[test]
    fn round_trips_through_toml() {
        let mut cfg = parse("[scenario]\nmodel = \"adiabatic\"\n[lumped]\nstrain_end = 0.3\n").unwrap();
        cfg.parabolic.reference_homogenized_c = Some([25.0, 55.0]);
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(parse(&text).unwrap(), cfg);
    }

    #[test]
    fn stiffness_overrides_apply() {
        let cfg = parse("[stiffness]\nvariant = \"linear\"\nkappa0 = 0.0\ncutoff_temperature = 100.0\n").unwrap();
        let s = cfg.stiffness_model();
        assert_eq!(s.variant, Softening::Linear);
        assert_eq!(s.kappa0, 0.0);
        assert_eq!(s.cutoff_temperature, 100.0);
    }

    #[test]
    fn sweep_merges_over_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("base.toml"),
            "[scenario]\nname = \"base\"\nmodel = \"parabolic\"\n[parabolic]\ngrid_n = 40\ntau_end = 10.0\n",
        )
        .unwrap();
        let sweep = dir.path().join("sweep.toml");
        std::fs::write(
            &sweep,
            "[sweep]\nbase = \"base.toml\"\nr_values = [0.8, 0.9]\nv_values = [6.0]\n[parabolic]\ntau_end = 5.0\n",
        )
        .unwrap();
        let cfg = ScenarioConfig::load(&sweep).unwrap();
        assert_eq!(cfg.scenario.name, "base");
        assert_eq!(cfg.parabolic.grid_n, 40);
        assert_eq!(cfg.parabolic.tau_end, 5.0);
        let s = cfg.sweep.unwrap();
        assert_eq!(s.r_values, vec![0.8, 0.9]);
        assert_eq!(s.model, SweepModel::Parabolic);
    }

    #[test]
    fn sweep_grid_rules() {
        let m = default_params();
        let mut s = SweepSection {
            base: None,
            r_values: vec![0.8],
            v_values: vec![6.0],
            model: SweepModel::Parabolic,
            bond_threshold_c: 150.0,
        };
        s.validate(&m).unwrap();
        s.bond_threshold_c = 170.0;
        assert!(s.validate(&m).is_err());
        s.bond_threshold_c = 150.0;
        s.r_values.push(0.5);
        assert!(s.validate(&m).is_err());
        s.r_values.pop();
        s.v_values = vec![0.0];
        assert!(s.validate(&m).is_err());
    }
}
