//! Batch runs: CSV output, run manifests, sweeps and figure presets.
//!
//! Floats are written with 17 significant digits so that every CSV parses
//! back to the exact values that were computed, and identical inputs give
//! byte-identical files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ModelKind, ScenarioConfig, SweepModel, SweepSection};
use crate::error::{Error, Result};
use crate::integrators::SolverStats;
use crate::lumped::{run_lumped, LumpedMode, LumpedScenario, TemperatureTrace};
use crate::parabolic::{ParabolicRun, ParabolicStats, TemperatureField};
use crate::stiffness::Softening;
use crate::thickness_fit::{
    linspace, single_sheet_curve, SingleSheetCurve, P_BASE, P_BASE_10_FABRIC,
};

pub const TRACE_HEADER: [&str; 5] = ["abscissa", "strain", "temperature_C", "heating_term", "flux_term"];
pub const FIELD_HEADER: [&str; 4] = ["tau", "zeta", "temperature_C", "phase"];
pub const CENTERLINE_HEADER: [&str; 2] = ["tau", "centerline_C"];
pub const SUMMARY_HEADER: [&str; 5] = ["r", "v_fabric", "peak_centerline_C", "homogenized_C", "bonded_flag"];
pub const SWEEP_HEADER: [&str; 6] = ["r", "v_fabric", "peak_centerline_C", "homogenized_C", "bonded_flag", "error"];
pub const PRESSURE_HEADER: [&str; 2] = ["x_mm", "pressure_MPa"];
pub const SINGLE_SHEET_HEADER: [&str; 2] = ["w_single_mm", "pressure_MPa"];

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_trace_csv(path: &Path, trace: &TemperatureTrace) -> Result<()> {
    write_rows(
        path,
        &TRACE_HEADER,
        trace.samples.iter().map(|s| {
            vec![
                fmt_f64(s.abscissa),
                fmt_f64(s.strain),
                fmt_f64(s.temperature),
                fmt_f64(s.heating_term),
                fmt_f64(s.flux_term),
            ]
        }),
    )
}

/// One row per node and snapshot.
pub fn write_field_csv(path: &Path, snapshots: &[TemperatureField], nodes: &[f64]) -> Result<()> {
    write_rows(
        path,
        &FIELD_HEADER,
        snapshots.iter().flat_map(|snap| {
            nodes.iter().zip(&snap.values).map(move |(z, t)| {
                vec![fmt_f64(snap.tau), fmt_f64(*z), fmt_f64(*t), snap.phase.label().to_string()]
            })
        }),
    )
}

pub fn write_centerline_csv(path: &Path, centerline: &[(f64, f64)]) -> Result<()> {
    write_rows(path, &CENTERLINE_HEADER, centerline.iter().map(|(t, v)| vec![fmt_f64(*t), fmt_f64(*v)]))
}

/// Outcome of one parabolic or roller run at one `(r, v)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub r: f64,
    pub v_fabric: f64,
    pub peak_centerline: Option<f64>,
    /// Only the parabolic model has one.
    pub homogenized: Option<f64>,
    pub bonded: Option<bool>,
    pub error: Option<String>,
}

impl SummaryRow {
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.r),
            fmt_f64(self.v_fabric),
            fmt_opt(self.peak_centerline),
            fmt_opt(self.homogenized),
            self.bonded.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_rows(path, &SUMMARY_HEADER, rows.iter().map(SummaryRow::fields))
}

pub fn write_sweep_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_rows(
        path,
        &SWEEP_HEADER,
        rows.iter().map(|row| {
            let mut fields = row.fields();
            fields.push(row.error.clone().unwrap_or_default());
            fields
        }),
    )
}

pub fn write_pressure_csv(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    write_rows(path, &PRESSURE_HEADER, points.iter().map(|(x, p)| vec![fmt_f64(*x), fmt_f64(*p)]))
}

pub fn write_single_sheet_csv(path: &Path, curve: &SingleSheetCurve) -> Result<()> {
    write_rows(
        path,
        &SINGLE_SHEET_HEADER,
        curve.points.iter().map(|p| vec![fmt_f64(p.w_single), fmt_f64(p.pressure)]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RunStats {
    Lumped(SolverStats),
    Parabolic(ParabolicStats),
    Sweep { cells: usize, failures: usize },
    Curve { samples: usize, failures: usize },
    Figure(Vec<RunStats>),
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub name: String,
    /// Full echo of the scenario that was run, when there is one.
    pub scenario: Option<ScenarioConfig>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub stats: RunStats,
    /// Headline numbers of the run, keyed by name.
    pub results: Vec<(String, f64)>,
    /// Discrepancies against reference values and convergence warnings.
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn result(&self, key: &str) -> Option<f64> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Writes `<out_dir>/<name>_manifest.json` and returns its path.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join(format!("{}_manifest.json", self.name));
        let file = std::fs::File::create(&path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(path)
    }
}

fn sanitize(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    if cleaned.is_empty() {
        "scenario".into()
    } else {
        cleaned
    }
}

/// Summary of a parabolic run against a bonding threshold.
pub fn summarize_parabolic(r: f64, v: f64, run: &ParabolicRun, threshold: f64) -> SummaryRow {
    SummaryRow {
        r,
        v_fabric: v,
        peak_centerline: Some(run.peak_centerline),
        homogenized: run.homogenized,
        bonded: Some(run.peak_centerline >= threshold),
        error: None,
    }
}

/// Runs one validated scenario and writes its CSV files and manifest.
pub fn run_config(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let name = sanitize(&config.scenario.name);
    let mut outputs = Vec::new();
    let mut results = Vec::new();
    let mut notes = Vec::new();

    let stats = match config.scenario.model {
        ModelKind::Parabolic => {
            let model = config.parabolic_model()?;
            let run = model.run(None, &config.parabolic_options())?;
            let field = out_dir.join(format!("{name}_field.csv"));
            write_field_csv(&field, &run.snapshots, &model.grid.nodes())?;
            let centerline = out_dir.join(format!("{name}_centerline.csv"));
            write_centerline_csv(&centerline, &run.centerline)?;
            let summary = out_dir.join(format!("{name}_summary.csv"));
            let row = summarize_parabolic(
                config.roller.compression_ratio,
                config.roller.line_speed_m_s,
                &run,
                config.parabolic.bond_threshold_c,
            );
            write_summary_csv(&summary, std::slice::from_ref(&row))?;
            outputs.extend([field, centerline, summary]);

            results.push(("peak_centerline_C".into(), run.peak_centerline));
            if let Some(exit) = &run.contact_exit {
                results.push(("contact_exit_mean_C".into(), exit.mean()));
            }
            if let Some(h) = run.homogenized {
                results.push(("homogenized_C".into(), h));
                results.push(("final_spread_C".into(), run.spread));
                if !run.converged {
                    notes.push(format!(
                        "profile not yet uniform at tau_end = {}: spread {:.3} °C; homogenized value is the node mean",
                        config.parabolic.tau_end, run.spread
                    ));
                }
                if let Some([lo, hi]) = config.parabolic.reference_homogenized_c {
                    if !(lo..=hi).contains(&h) {
                        notes.push(format!(
                            "homogenized temperature {h:.2} °C lies outside the reference range [{lo}, {hi}] °C; \
                             reported as computed from the printed model with k_fabric = {} W/(m K)",
                            config.materials.k_fabric
                        ));
                    }
                }
            }
            RunStats::Parabolic(run.stats)
        }
        _ => {
            let scenario = config.lumped_scenario()?;
            let points = scenario.uniform_points(config.lumped.output_points)?;
            let trace = run_lumped(&scenario, &points, &config.integrator)?;
            let path = out_dir.join(format!("{name}_trace.csv"));
            write_trace_csv(&path, &trace)?;
            outputs.push(path);
            results.push(("peak_C".into(), trace.peak_temperature()));
            results.push(("final_C".into(), trace.final_temperature()));
            RunStats::Lumped(trace.stats)
        }
    };

    let mut manifest = RunManifest {
        name,
        scenario: Some(config.clone()),
        outputs,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        stats,
        results,
        notes,
    };
    let path = manifest.write(out_dir)?;
    manifest.outputs.push(path);
    Ok(manifest)
}

/// Loads, validates and runs a scenario file.
pub fn run_scenario(config_path: &Path, out_dir: &Path) -> Result<RunManifest> {
    run_config(&ScenarioConfig::load(config_path)?, out_dir)
}

/// Loads and validates a scenario or sweep file without running it.
pub fn validate_config(config_path: &Path) -> Result<ScenarioConfig> {
    let config = ScenarioConfig::load(config_path)?;
    config.validate()?;
    Ok(config)
}

fn sweep_cell(config: &ScenarioConfig, grid: &SweepSection, r: f64, v: f64) -> SummaryRow {
    let mut cell = config.clone();
    cell.roller.compression_ratio = r;
    cell.roller.line_speed_m_s = v;
    let threshold = grid.bond_threshold_c;
    let outcome = match grid.model {
        SweepModel::Parabolic => cell
            .parabolic_model()
            .and_then(|m| m.run(None, &cell.parabolic_options()))
            .map(|run| summarize_parabolic(r, v, &run, threshold)),
        SweepModel::LumpedRoller => {
            let scenario = LumpedScenario::new(
                cell.materials,
                cell.stiffness_model(),
                LumpedMode::RollerScaledTime { setup: cell.roller_setup() },
            );
            scenario
                .uniform_points(cell.lumped.output_points)
                .and_then(|pts| run_lumped(&scenario, &pts, &cell.integrator))
                .map(|trace| {
                    let peak = trace.peak_temperature();
                    SummaryRow {
                        r,
                        v_fabric: v,
                        peak_centerline: Some(peak),
                        homogenized: None,
                        bonded: Some(peak >= threshold),
                        error: None,
                    }
                })
        }
    };
    outcome.unwrap_or_else(|e| SummaryRow {
        r,
        v_fabric: v,
        peak_centerline: None,
        homogenized: None,
        bonded: None,
        error: Some(e.to_string()),
    })
}

/// Runs every `(r, v)` cell of the sweep on a pool of `workers` threads
/// (all processors when `None`). Rows come back in grid order, `r` outer.
pub fn run_sweep(config: &ScenarioConfig, out_dir: &Path, workers: Option<usize>) -> Result<(Vec<SummaryRow>, RunManifest)> {
    let grid = config
        .sweep
        .clone()
        .ok_or_else(|| Error::validation("sweep", "config has no [sweep] table"))?;
    config.materials.validate()?;
    config.integrator.validate()?;
    grid.validate(&config.materials)?;
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let name = sanitize(&config.scenario.name);
    let cell_dir = out_dir.join(format!("{name}_cells"));
    std::fs::create_dir_all(&cell_dir)?;

    let cells: Vec<(usize, usize, f64, f64)> = grid
        .r_values
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| grid.v_values.iter().enumerate().map(move |(j, &v)| (i, j, r, v)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::validation("workers", e.to_string()))?;
    let rows: Vec<Result<SummaryRow>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, j, r, v)| {
                let row = sweep_cell(config, &grid, r, v);
                write_sweep_csv(&cell_dir.join(format!("cell_{i:03}_{j:03}.csv")), std::slice::from_ref(&row))?;
                Ok(row)
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let merged = out_dir.join(format!("{name}_sweep.csv"));
    write_sweep_csv(&merged, &rows)?;
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    let mut notes = Vec::new();
    if failures > 0 {
        notes.push(format!("{failures} of {} cells failed; see the error column", rows.len()));
    }
    let mut manifest = RunManifest {
        name: format!("{name}_sweep"),
        scenario: Some(config.clone()),
        outputs: vec![merged, cell_dir],
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        stats: RunStats::Sweep { cells: rows.len(), failures },
        results: Vec::new(),
        notes,
    };
    let path = manifest.write(out_dir)?;
    manifest.outputs.push(path);
    Ok((rows, manifest))
}

pub fn run_sweep_file(config_path: &Path, out_dir: &Path, workers: Option<usize>) -> Result<(Vec<SummaryRow>, RunManifest)> {
    run_sweep(&ScenarioConfig::load(config_path)?, out_dir, workers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig6,
    Fig7,
    Fig8,
    Fig11,
    Fig13,
    Fig15,
    Fig16,
    Fig17,
    Fig18,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig11,
        FigureId::Fig13,
        FigureId::Fig15,
        FigureId::Fig16,
        FigureId::Fig17,
        FigureId::Fig18,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig11 => "fig11",
            FigureId::Fig13 => "fig13",
            FigureId::Fig15 => "fig15",
            FigureId::Fig16 => "fig16",
            FigureId::Fig17 => "fig17",
            FigureId::Fig18 => "fig18",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| {
            let valid: Vec<&str> = FigureId::ALL.iter().map(|id| id.as_str()).collect();
            Error::validation("figure", format!("unknown figure `{s}`; valid ids: {}", valid.join(", ")))
        })
    }
}

/// Overrides for figure emission; `None` keeps the preset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub grid_n: Option<usize>,
    pub tau_end: Option<f64>,
    /// Displacement range for the pressure curves, mm.
    pub x_range: Option<(f64, f64)>,
    pub samples: Option<usize>,
}

fn lumped_preset(name: &str, model: ModelKind, variant: Softening) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::default();
    cfg.scenario.name = name.into();
    cfg.scenario.model = model;
    cfg.stiffness.variant = variant;
    cfg.lumped.strain_end = 0.4;
    cfg.roller.compression_ratio = 0.6;
    cfg
}

fn parabolic_preset(name: &str, v: f64, r: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::default();
    cfg.scenario.name = name.into();
    cfg.scenario.model = ModelKind::Parabolic;
    cfg.materials.k_steel = 17.0;
    cfg.roller.line_speed_m_s = v;
    cfg.roller.compression_ratio = r;
    cfg
}

/// Scenarios behind a model figure; empty for the pressure-curve figures.
pub fn figure_presets(id: FigureId) -> Vec<ScenarioConfig> {
    match id {
        FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8 => Vec::new(),
        FigureId::Fig11 => vec![
            lumped_preset("fig11_linear", ModelKind::Adiabatic, Softening::Linear),
            lumped_preset("fig11_quadratic", ModelKind::Adiabatic, Softening::Quadratic),
        ],
        FigureId::Fig13 => {
            let mut out = Vec::new();
            for (label, dt) in [("10ms", 10e-3), ("1ms", 1e-3), ("0.1ms", 0.1e-3)] {
                let mut flux = lumped_preset(&format!("fig13_dt{label}_flux"), ModelKind::ConstantSpeed, Softening::Quadratic);
                flux.lumped.compression_time_s = dt;
                out.push(flux);
                // without the loss term the trace in strain does not depend on dt
                let mut bare = lumped_preset(&format!("fig13_dt{label}_noflux"), ModelKind::Adiabatic, Softening::Quadratic);
                bare.lumped.compression_time_s = dt;
                out.push(bare);
            }
            out
        }
        FigureId::Fig15 => {
            let mut cfg = lumped_preset("fig15", ModelKind::Roller, Softening::Quadratic);
            cfg.roller.line_speed_m_s = 6.0;
            vec![cfg]
        }
        FigureId::Fig16 => {
            let mut cfg = parabolic_preset("fig16", 6.0, 0.8);
            cfg.parabolic.reference_homogenized_c = Some([25.0, 55.0]);
            vec![cfg]
        }
        FigureId::Fig17 => vec![parabolic_preset("fig17", 0.6, 0.8)],
        FigureId::Fig18 => vec![parabolic_preset("fig18", 6.0, 0.95)],
    }
}

/// Writes the data behind one figure into `out_dir`.
pub fn emit_figure_data(id: FigureId, out_dir: &Path, options: &FigureOptions) -> Result<RunManifest> {
    std::fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let samples = options.samples.unwrap_or(401);
    if samples < 2 {
        return Err(Error::validation("samples", "must be at least 2"));
    }
    let stacked_peak = P_BASE_10_FABRIC.peak_displacement().unwrap_or(0.1);
    let default_range = match id {
        FigureId::Fig6 => (0.0, 1.0),
        FigureId::Fig7 => (-P_BASE_10_FABRIC.shift, stacked_peak),
        // no fabric displacement can be solved for where the stack carries no load
        _ => (-0.97, stacked_peak),
    };
    let (lo, hi) = options.x_range.unwrap_or(default_range);
    if !(lo < hi) {
        return Err(Error::validation("x_range", "x_min must be below x_max"));
    }

    let mut outputs = Vec::new();
    let mut notes = Vec::new();
    let mut results = Vec::new();
    let stats = match id {
        FigureId::Fig6 | FigureId::Fig7 => {
            let fit = if id == FigureId::Fig6 { P_BASE } else { P_BASE_10_FABRIC };
            let points: Vec<(f64, f64)> = linspace(lo, hi, samples).into_iter().map(|x| (x, fit.eval(x))).collect();
            let path = out_dir.join(format!("{id}_pressure.csv"));
            write_pressure_csv(&path, &points)?;
            outputs.push(path);
            RunStats::Curve { samples, failures: 0 }
        }
        FigureId::Fig8 => {
            let curve = single_sheet_curve(&linspace(lo, hi, samples));
            let path = out_dir.join(format!("{id}_single_sheet.csv"));
            write_single_sheet_csv(&path, &curve)?;
            outputs.push(path);
            for failure in &curve.failures {
                notes.push(format!("x = {} mm: {}", failure.x, failure.message));
            }
            if let Some(last) = curve.points.last() {
                results.push(("end_w_single_mm".into(), last.w_single));
            }
            RunStats::Curve { samples, failures: curve.failures.len() }
        }
        _ => {
            let mut all = Vec::new();
            for mut cfg in figure_presets(id) {
                if let Some(n) = options.grid_n {
                    cfg.parabolic.grid_n = n;
                }
                if let Some(t) = options.tau_end {
                    cfg.parabolic.tau_end = t;
                }
                let manifest = run_config(&cfg, out_dir)?;
                outputs.extend(manifest.outputs);
                notes.extend(manifest.notes.into_iter().map(|n| format!("{}: {n}", manifest.name)));
                results.extend(manifest.results.into_iter().map(|(k, v)| (format!("{}.{k}", manifest.name), v)));
                all.push(manifest.stats);
            }
            RunStats::Figure(all)
        }
    };
    let mut manifest = RunManifest {
        name: format!("{id}_figure"),
        scenario: None,
        outputs,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        stats,
        results,
        notes,
    };
    let path = manifest.write(out_dir)?;
    manifest.outputs.push(path);
    Ok(manifest)
}
