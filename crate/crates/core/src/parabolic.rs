//! Through-thickness heat conduction in the web.
//!
//! The thickness is mapped onto `zeta in [-1, 1]` and discretised on `N + 1`
//! nodes. While the web is in the nip (`tau <= 1`) both faces are held at
//! the roller temperature and the compression work heats every interior
//! node. Past the nip the web is insulated: the faces switch to the
//! one-sided rows `c (T_1 - T_0)` and `c (T_{N-1} - T_N)`, the thickness is
//! frozen at `r h_min`, and the profile relaxes to its node mean.
//!
//! Each step is a trapezoidal (Crank–Nicolson) step solved with one
//! tridiagonal elimination; during contact the clamped source is iterated to
//! a fixed point inside the step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrators::thomas_in_place;
use crate::kinematics::{CompressionSchedule, RollerSetup};
use crate::materials::MaterialParams;
use crate::stiffness::StiffnessModel;

/// Spread below which the relaxed profile counts as uniform, °C.
pub const HOMOGENIZED_SPREAD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    /// Number of intervals; even so that the centreline is a node.
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        let grid = Grid { n };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return Err(Error::validation(
                "parabolic.grid_n",
                format!("must be even and at least 4, got {}", self.n),
            ));
        }
        Ok(())
    }

    pub fn delta_zeta(&self) -> f64 {
        2.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn center(&self) -> usize {
        self.n / 2
    }

    pub fn nodes(&self) -> Vec<f64> {
        let dz = self.delta_zeta();
        (0..=self.n).map(|k| -1.0 + k as f64 * dz).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Contact,
    Relaxation,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Contact => "contact",
            Phase::Relaxation => "relaxation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperatureField {
    pub tau: f64,
    /// Node temperatures `T_0..=T_N`, °C.
    pub values: Vec<f64>,
    pub phase: Phase,
    /// Web thickness, m.
    pub thickness: f64,
}

impl TemperatureField {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn spread(&self) -> f64 {
        let (lo, hi) = min_max(&self.values);
        hi - lo
    }

    pub fn centerline(&self) -> f64 {
        self.values[self.values.len() / 2]
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// How the web thickness evolves with scaled time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThicknessLaw {
    /// `h_min (1 - s(tau))` in the nip, `r h_min` after it.
    Kinematic,
    /// Constant thickness, m.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicModel {
    pub schedule: CompressionSchedule,
    pub materials: MaterialParams,
    pub grid: Grid,
    pub stiffness: StiffnessModel,
    pub source_enabled: bool,
    pub thickness_law: ThicknessLaw,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicOptions {
    pub tau_step: f64,
    pub tau_end: f64,
    /// Scaled times at which full profiles are kept. Values beyond
    /// `tau_end` are ignored.
    pub snapshot_taus: Vec<f64>,
    pub fixed_point_tol: f64,
    pub max_fixed_point_iterations: usize,
}

impl Default for ParabolicOptions {
    fn default() -> Self {
        ParabolicOptions {
            tau_step: 1e-3,
            tau_end: 40.0,
            snapshot_taus: vec![0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0],
            fixed_point_tol: 1e-10,
            max_fixed_point_iterations: 200,
        }
    }
}

impl ParabolicOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_step > 0.0 && self.tau_step.is_finite()) {
            return Err(Error::validation("parabolic.tau_step", "must be positive"));
        }
        if !(self.tau_end > 0.0 && self.tau_end.is_finite()) {
            return Err(Error::validation("parabolic.tau_end", "must be positive"));
        }
        if let Some(bad) = self.snapshot_taus.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::validation(
                "parabolic.snapshot_taus",
                format!("must be finite and non-negative, got {bad}"),
            ));
        }
        if !(self.fixed_point_tol > 0.0) {
            return Err(Error::validation("parabolic.fixed_point_tol", "must be positive"));
        }
        if self.max_fixed_point_iterations == 0 {
            return Err(Error::validation("parabolic.max_fixed_point_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ParabolicStats {
    pub contact_steps: usize,
    pub relaxation_steps: usize,
    /// Total source fixed-point sweeps over all contact steps.
    pub fixed_point_iterations: usize,
    /// Largest step actually taken, after the stability cap.
    pub tau_step_used: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParabolicRun {
    pub snapshots: Vec<TemperatureField>,
    /// `(tau, T_center)` at every step node.
    pub centerline: Vec<(f64, f64)>,
    pub peak_centerline: f64,
    /// Field leaving the nip, when the run reached `tau = 1`.
    pub contact_exit: Option<TemperatureField>,
    pub final_field: TemperatureField,
    /// Node mean at `tau_end`; `None` if the run never left the nip.
    pub homogenized: Option<f64>,
    /// max - min of the final profile, °C.
    pub spread: f64,
    /// `spread < HOMOGENIZED_SPREAD` at `tau_end`.
    pub converged: bool,
    /// Smallest and largest node value over the whole run.
    pub min_temperature: f64,
    pub max_temperature: f64,
    /// Largest `|sum T(tau) - sum T(1)| / |sum T(1)|` over the insulated phase.
    pub relaxation_sum_drift: f64,
    pub stats: ParabolicStats,
}

impl ParabolicModel {
    /// Standard configuration: kinematic thickness, quadratic softening,
    /// source on.
    pub fn new(setup: RollerSetup, materials: MaterialParams, grid: Grid) -> Result<Self> {
        materials.validate()?;
        grid.validate()?;
        Ok(ParabolicModel {
            schedule: CompressionSchedule::new(setup)?,
            materials,
            grid,
            stiffness: StiffnessModel::quadratic(&materials),
            source_enabled: true,
            thickness_law: ThicknessLaw::Kinematic,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        self.grid.validate()?;
        self.stiffness.validate()?;
        self.schedule.setup.validate()?;
        if let ThicknessLaw::Fixed(h) = self.thickness_law {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::validation("parabolic.thickness", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn thickness(&self, tau: f64) -> f64 {
        match self.thickness_law {
            ThicknessLaw::Kinematic => self.schedule.scaled(tau).thickness,
            ThicknessLaw::Fixed(h) => h,
        }
    }

    fn min_thickness(&self) -> f64 {
        match self.thickness_law {
            ThicknessLaw::Kinematic => self.schedule.setup.h_min * self.schedule.setup.compression_ratio,
            ThicknessLaw::Fixed(h) => h,
        }
    }

    /// Diffusion factor `dt K / (dzeta^2 h w Cp)` multiplying the stencils.
    pub fn diffusion_factor(&self, thickness: f64) -> f64 {
        let m = &self.materials;
        let dz = self.grid.delta_zeta();
        self.schedule.delta_t * m.k_fabric / (dz * dz * thickness * m.areal_heat_capacity())
    }

    /// Volumetric heat production at one node, as printed: `v s kappa / 2`
    /// times the quadratic softening. Zero after the nip.
    pub fn source_term(&self, tau: f64, temperature: f64) -> Result<f64> {
        if !self.source_enabled || tau > 1.0 {
            return Ok(0.0);
        }
        let k = self.schedule.scaled(tau);
        Ok(k.strain_rate * k.strain * self.stiffness.kappa_fabric(k.strain)? / 2.0
            * self.stiffness.softening(temperature))
    }

    /// dT_k/dtau in the nip. Face rows are zero.
    pub fn rhs_contact(&self, tau: f64, values: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.grid.n;
        let c = self.diffusion_factor(self.thickness(tau));
        let scale = self.schedule.delta_t / self.materials.areal_heat_capacity();
        out[0] = 0.0;
        out[n] = 0.0;
        for k in 1..n {
            let lap = values[k - 1] - 2.0 * values[k] + values[k + 1];
            out[k] = c * lap + scale * self.source_term(tau, values[k])?;
        }
        Ok(())
    }

    /// dT_k/dtau after the nip; the columns of this operator sum to zero.
    pub fn rhs_relaxation(&self, _tau: f64, values: &[f64], out: &mut [f64]) {
        let n = self.grid.n;
        let c = self.diffusion_factor(self.min_thickness());
        out[0] = c * (values[1] - values[0]);
        out[n] = c * (values[n - 1] - values[n]);
        for k in 1..n {
            out[k] = c * (values[k - 1] - 2.0 * values[k] + values[k + 1]);
        }
    }

    /// Starting profile: ambient inside, roller temperature on both faces.
    pub fn initial_field(&self) -> Vec<f64> {
        let mut values = vec![self.materials.t_ambient; self.grid.len()];
        values[0] = self.materials.t_steel;
        values[self.grid.n] = self.materials.t_steel;
        values
    }

    /// Integrates from `tau = 0` to `options.tau_end`. With `initial = None`
    /// the run starts from [`Self::initial_field`]; a supplied profile has
    /// its face values replaced by the roller temperature.
    pub fn run(&self, initial: Option<&[f64]>, options: &ParabolicOptions) -> Result<ParabolicRun> {
        self.validate()?;
        options.validate()?;
        let n = self.grid.n;
        let mut values = match initial {
            Some(v) if v.len() != self.grid.len() => {
                return Err(Error::validation(
                    "initial",
                    format!("expected {} node values, got {}", self.grid.len(), v.len()),
                ))
            }
            Some(v) => v.to_vec(),
            None => self.initial_field(),
        };
        values[0] = self.materials.t_steel;
        values[n] = self.materials.t_steel;

        // c dtau <= 1 keeps the explicit half of every row non-negative, which
        // is what the discrete maximum principle needs.
        let c_max = self.diffusion_factor(self.min_thickness());
        let step = options.tau_step.min(1.0 / c_max);
        let breakpoints = breakpoints(options);

        let mut stepper = Stepper::new(self.grid.len());
        let mut stats = ParabolicStats { tau_step_used: 0.0, ..ParabolicStats::default() };
        let mut snapshots = Vec::new();
        let mut centerline = vec![(0.0, values[n / 2])];
        let (mut min_temperature, mut max_temperature) = min_max(&values);
        let mut contact_exit = None;
        let mut exit_sum: Option<f64> = None;
        let mut drift: f64 = 0.0;
        let mut want = snapshot_targets(options);

        let record = |tau: f64, values: &[f64], phase: Phase, want: &mut Vec<f64>, snapshots: &mut Vec<TemperatureField>| {
            while want.first().is_some_and(|t| *t <= tau) {
                want.remove(0);
                snapshots.push(TemperatureField {
                    tau,
                    values: values.to_vec(),
                    phase,
                    thickness: self.thickness(tau),
                });
            }
        };
        record(0.0, &values, Phase::Contact, &mut want, &mut snapshots);

        for pair in breakpoints.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let contact = b <= 1.0;
            let steps = ((b - a) / step).ceil().max(1.0) as usize;
            let h = (b - a) / steps as f64;
            stats.tau_step_used = stats.tau_step_used.max(h);
            for i in 0..steps {
                let t0 = a + i as f64 * h;
                let t1 = if i + 1 == steps { b } else { a + (i + 1) as f64 * h };
                if contact {
                    stats.fixed_point_iterations += stepper.contact_step(self, t0, t1, &mut values, options)?;
                    stats.contact_steps += 1;
                } else {
                    stepper.relaxation_step(self, t1 - t0, &mut values)?;
                    stats.relaxation_steps += 1;
                    let sum: f64 = values.iter().sum();
                    if let Some(s1) = exit_sum {
                        drift = drift.max(((sum - s1) / s1).abs());
                    }
                }
                let (lo, hi) = min_max(&values);
                min_temperature = min_temperature.min(lo);
                max_temperature = max_temperature.max(hi);
                centerline.push((t1, values[n / 2]));
                let phase = if contact { Phase::Contact } else { Phase::Relaxation };
                record(t1, &values, phase, &mut want, &mut snapshots);
            }
            if contact && b == 1.0 {
                contact_exit = Some(TemperatureField {
                    tau: 1.0,
                    values: values.clone(),
                    phase: Phase::Contact,
                    thickness: self.thickness(1.0),
                });
                exit_sum = Some(values.iter().sum::<f64>());
            }
        }

        let tau_end = options.tau_end;
        let final_phase = if tau_end > 1.0 { Phase::Relaxation } else { Phase::Contact };
        let final_field = TemperatureField {
            tau: tau_end,
            values,
            phase: final_phase,
            thickness: self.thickness(tau_end),
        };
        let spread = final_field.spread();
        let homogenized = (tau_end >= 1.0).then(|| final_field.mean());
        let peak_centerline = centerline.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Ok(ParabolicRun {
            snapshots,
            centerline,
            peak_centerline,
            contact_exit,
            homogenized,
            spread,
            converged: homogenized.is_some() && spread < HOMOGENIZED_SPREAD,
            final_field,
            min_temperature,
            max_temperature,
            relaxation_sum_drift: drift,
            stats,
        })
    }
}

/// Segment ends: 0, the nip exit, every snapshot time and `tau_end`.
fn breakpoints(options: &ParabolicOptions) -> Vec<f64> {
    let mut points = vec![0.0, options.tau_end];
    if options.tau_end > 1.0 {
        points.push(1.0);
    }
    points.extend(options.snapshot_taus.iter().copied().filter(|t| *t > 0.0 && *t < options.tau_end));
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

fn snapshot_targets(options: &ParabolicOptions) -> Vec<f64> {
    let mut want: Vec<f64> = options
        .snapshot_taus
        .iter()
        .copied()
        .filter(|t| *t <= options.tau_end)
        .collect();
    want.sort_by(f64::total_cmp);
    want.dedup();
    want
}

/// Work buffers for the trapezoidal steps.
struct Stepper {
    lower: Vec<f64>,
    diagonal: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    explicit: Vec<f64>,
    source_old: Vec<f64>,
    iterate: Vec<f64>,
    scratch: Vec<f64>,
}

impl Stepper {
    fn new(len: usize) -> Self {
        Stepper {
            lower: vec![0.0; len],
            diagonal: vec![0.0; len],
            upper: vec![0.0; len],
            rhs: vec![0.0; len],
            explicit: vec![0.0; len],
            source_old: vec![0.0; len],
            iterate: vec![0.0; len],
            scratch: Vec::with_capacity(len),
        }
    }

    /// One trapezoidal step over `[t0, t1]` inside the nip. Returns the
    /// number of fixed-point sweeps.
    fn contact_step(
        &mut self,
        model: &ParabolicModel,
        t0: f64,
        t1: f64,
        values: &mut [f64],
        options: &ParabolicOptions,
    ) -> Result<usize> {
        let n = model.grid.n;
        let dt = t1 - t0;
        let scale = model.schedule.delta_t / model.materials.areal_heat_capacity();
        let c0 = model.diffusion_factor(model.thickness(t0));
        let c1 = model.diffusion_factor(model.thickness(t1));

        self.explicit[0] = values[0];
        self.explicit[n] = values[n];
        for k in 1..n {
            let lap = values[k - 1] - 2.0 * values[k] + values[k + 1];
            self.source_old[k] = scale * model.source_term(t0, values[k])?;
            self.explicit[k] = values[k] + 0.5 * dt * (c0 * lap + self.source_old[k]);
        }
        self.iterate.copy_from_slice(values);

        for sweep in 1..=options.max_fixed_point_iterations {
            self.lower.fill(0.0);
            self.upper.fill(0.0);
            self.diagonal.fill(1.0);
            self.rhs[0] = values[0];
            self.rhs[n] = values[n];
            for k in 1..n {
                self.lower[k] = -0.5 * dt * c1;
                self.upper[k] = -0.5 * dt * c1;
                self.diagonal[k] = 1.0 + dt * c1;
                let source_new = scale * model.source_term(t1, self.iterate[k])?;
                self.rhs[k] = self.explicit[k] + 0.5 * dt * source_new;
            }
            thomas_in_place(&self.lower, &self.diagonal, &self.upper, &mut self.rhs, &mut self.scratch)?;
            let update = self
                .rhs
                .iter()
                .zip(&self.iterate)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            self.iterate.copy_from_slice(&self.rhs);
            if update <= options.fixed_point_tol || !model.source_enabled {
                values.copy_from_slice(&self.iterate);
                return Ok(sweep);
            }
        }
        let update = self.rhs.iter().zip(values.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Err(Error::FixedPointNonConvergence { tau: t1, update })
    }

    /// One trapezoidal step of the insulated, source-free system.
    fn relaxation_step(&mut self, model: &ParabolicModel, dt: f64, values: &mut [f64]) -> Result<()> {
        let n = model.grid.n;
        let c = model.diffusion_factor(model.min_thickness());
        let half = 0.5 * dt * c;
        self.rhs[0] = values[0] + half * (values[1] - values[0]);
        self.rhs[n] = values[n] + half * (values[n - 1] - values[n]);
        for k in 1..n {
            self.rhs[k] = values[k] + half * (values[k - 1] - 2.0 * values[k] + values[k + 1]);
        }
        self.lower.fill(-half);
        self.upper.fill(-half);
        self.diagonal.fill(1.0 + 2.0 * half);
        self.diagonal[0] = 1.0 + half;
        self.diagonal[n] = 1.0 + half;
        self.lower[0] = 0.0;
        self.upper[n] = 0.0;
        thomas_in_place(&self.lower, &self.diagonal, &self.upper, &mut self.rhs, &mut self.scratch)?;
        values.copy_from_slice(&self.rhs);
        Ok(())
    }
}

/// Runs the standard model for one roller setup from the default profile.
pub fn run_parabolic(
    setup: RollerSetup,
    materials: MaterialParams,
    grid: Grid,
    options: &ParabolicOptions,
) -> Result<ParabolicRun> {
    ParabolicModel::new(setup, materials, grid)?.run(None, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::default_params;
    use std::f64::consts::PI;

    fn setup(r: f64, v: f64) -> RollerSetup {
        RollerSetup { radius: 0.2, line_speed: v, compression_ratio: r, h_min: 14e-6 }
    }

    fn model(n: usize) -> ParabolicModel {
        ParabolicModel::new(setup(0.8, 6.0), default_params(), Grid::new(n).unwrap()).unwrap()
    }

    fn short(tau_end: f64) -> ParabolicOptions {
        ParabolicOptions { tau_end, snapshot_taus: vec![], ..ParabolicOptions::default() }
    }

    #[test]
    fn grid_rules() {
        assert!(Grid::new(3).is_err());
        assert!(Grid::new(2).is_err());
        assert!(Grid::new(7).is_err());
        let g = Grid::new(4).unwrap();
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.delta_zeta(), 0.5);
        assert_eq!(g.nodes()[g.center()], 0.0);
    }

    #[test]
    fn source_examples() {
        let m = model(4);
        assert_eq!(m.source_term(1.0, 20.0).unwrap(), 0.0);
        assert_eq!(m.source_term(1.5, 20.0).unwrap(), 0.0);
        assert_eq!(m.source_term(0.5, 160.0).unwrap(), 0.0);
        assert_eq!(m.source_term(0.0, 20.0).unwrap(), 0.0);
        let k = m.schedule.scaled(0.5);
        let expected = k.strain_rate * k.strain * 16e6 / (1.0 - 2.0 * k.strain) / 2.0;
        assert!((m.source_term(0.5, 20.0).unwrap() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn contact_stencil_examples() {
        let mut m = model(4);
        m.source_enabled = false;
        let mut out = vec![1.0; 5];
        m.rhs_contact(0.3, &[20.0; 5], &mut out).unwrap();
        assert!(out.iter().all(|d| *d == 0.0));
        let affine: Vec<f64> = m.grid.nodes().iter().map(|z| 40.0 + 10.0 * z).collect();
        m.rhs_contact(0.3, &affine, &mut out).unwrap();
        assert!(out.iter().all(|d| d.abs() < 1e-9));

        let hot = [20.0, 20.0, 30.0, 20.0, 20.0];
        m.rhs_contact(0.3, &hot, &mut out).unwrap();
        let c = m.diffusion_factor(m.thickness(0.3));
        assert_eq!(out[0], 0.0);
        assert_eq!(out[4], 0.0);
        assert!((out[2] + 20.0 * c).abs() < 1e-9 * c);
        assert!((out[1] - 10.0 * c).abs() < 1e-9 * c);
        assert!((out[3] - 10.0 * c).abs() < 1e-9 * c);
        // interior second differences telescope to the two boundary fluxes
        let sum: f64 = out[1..4].iter().sum();
        let flux = c * ((hot[0] - hot[1]) + (hot[4] - hot[3]));
        assert!((sum - flux).abs() < 1e-9 * c);
    }

    #[test]
    fn relaxation_stencil_examples() {
        let m = model(8);
        let mut out = vec![0.0; 9];
        m.rhs_relaxation(2.0, &[35.0; 9], &mut out);
        assert!(out.iter().all(|d| *d == 0.0));
        let field = [20.0, 21.0, 25.0, 40.0, 70.0, 40.0, 25.0, 21.0, 20.0];
        m.rhs_relaxation(2.0, &field, &mut out);
        let total: f64 = out.iter().sum();
        assert!(total.abs() < 1e-9 * m.diffusion_factor(m.min_thickness()));
        for k in 0..=8 {
            assert_eq!(out[k], out[8 - k]);
        }
    }

    #[test]
    fn equilibrium_stays_put() {
        let mut m = model(10);
        m.source_enabled = false;
        let run = m.run(None, &short(3.0)).unwrap();
        assert!(run.final_field.values.iter().all(|v| (v - 20.0).abs() < 1e-9));
        assert!((run.min_temperature - 20.0).abs() < 1e-9);
        assert!((run.max_temperature - 20.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_conservative_and_bounded() {
        let m = model(20);
        let run = m.run(None, &short(6.0)).unwrap();
        for snap in run.snapshots.iter().chain([&run.final_field]) {
            let v = &snap.values;
            for k in 0..v.len() {
                assert!((v[k] - v[v.len() - 1 - k]).abs() <= 1e-10);
            }
        }
        assert!(run.relaxation_sum_drift <= 1e-8, "{}", run.relaxation_sum_drift);
        assert!(run.min_temperature >= 20.0 - 1e-9);
        assert!(run.max_temperature <= 160.0);
        let exit = run.contact_exit.unwrap();
        assert!((run.homogenized.unwrap() - exit.mean()).abs() < 1e-8 * exit.mean());
    }

    #[test]
    fn phase_switch_keeps_the_profile() {
        let m = model(10);
        let opts = ParabolicOptions { tau_end: 1.5, snapshot_taus: vec![1.0], ..ParabolicOptions::default() };
        let run = m.run(None, &opts).unwrap();
        let exit = run.contact_exit.unwrap();
        assert_eq!(run.snapshots.len(), 1);
        assert_eq!(run.snapshots[0].values, exit.values);
        assert_eq!(exit.values[0], 20.0);
        // faces warm up once insulated
        assert!(run.final_field.values[0] > 20.0);
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let m = model(10);
        let opts = ParabolicOptions {
            tau_end: 3.0,
            snapshot_taus: vec![0.0, 0.3333, 1.0, 2.5, 9.0],
            ..ParabolicOptions::default()
        };
        let run = m.run(None, &opts).unwrap();
        let taus: Vec<f64> = run.snapshots.iter().map(|s| s.tau).collect();
        assert_eq!(taus, vec![0.0, 0.3333, 1.0, 2.5]);
        assert_eq!(run.snapshots[3].phase, Phase::Relaxation);
        assert_eq!(run.snapshots[1].phase, Phase::Contact);
    }

    #[test]
    fn trapezoidal_step_matches_rhs() {
        // the step must satisfy T1 - T0 = dt/2 (f(t0, T0) + f(t1, T1))
        let m = model(8);
        let opts = short(0.3);
        let mut stepper = Stepper::new(9);
        let mut values = m.initial_field();
        for v in values.iter_mut().skip(1).take(7) {
            *v = 60.0;
        }
        let before = values.clone();
        stepper.contact_step(&m, 0.3, 0.301, &mut values, &opts).unwrap();
        let mut f0 = vec![0.0; 9];
        let mut f1 = vec![0.0; 9];
        m.rhs_contact(0.3, &before, &mut f0).unwrap();
        m.rhs_contact(0.301, &values, &mut f1).unwrap();
        for k in 0..9 {
            let expected = 0.5 * 0.001 * (f0[k] + f1[k]);
            assert!((values[k] - before[k] - expected).abs() < 1e-8, "node {k}");
        }
    }

    fn fourier_error(n: usize) -> f64 {
        // zero source, fixed thickness: T = Ts + A cos(pi zeta / 2) exp(-D (pi/2)^2 tau)
        let mut materials = default_params();
        materials.k_fabric = 2.0;
        let h = 12e-6;
        let mut m = ParabolicModel::new(setup(0.8, 6.0), materials, Grid::new(n).unwrap()).unwrap();
        m.source_enabled = false;
        m.thickness_law = ThicknessLaw::Fixed(h);
        let d = m.schedule.delta_t * materials.k_fabric / (h * materials.areal_heat_capacity());
        let amplitude = 50.0;
        let nodes = m.grid.nodes();
        let initial: Vec<f64> = nodes.iter().map(|z| 20.0 + amplitude * (PI * z / 2.0).cos()).collect();
        let tau_end = 0.5;
        let opts = ParabolicOptions { tau_step: 1e-4, tau_end, snapshot_taus: vec![], ..ParabolicOptions::default() };
        let run = m.run(Some(&initial), &opts).unwrap();
        let decay = (-d * (PI / 2.0).powi(2) * tau_end).exp();
        assert!(decay > 0.05 && decay < 0.95, "decay {decay}");
        nodes
            .iter()
            .zip(&run.final_field.values)
            .map(|(z, t)| (t - (20.0 + amplitude * (PI * z / 2.0).cos() * decay)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn second_order_in_space() {
        let e1 = fourier_error(8);
        let e2 = fourier_error(16);
        let e3 = fourier_error(32);
        let p1 = (e1 / e2).log2();
        let p2 = (e2 / e3).log2();
        assert!((1.7..=2.3).contains(&p1), "orders {p1} {p2}");
        assert!((1.7..=2.3).contains(&p2), "orders {p1} {p2}");
    }

    #[test]
    fn orderings_follow_compression_and_speed() {
        let opts = short(30.0);
        let grid = Grid::new(40).unwrap();
        let base = run_parabolic(setup(0.8, 6.0), default_params(), grid, &opts).unwrap();
        let gentle = run_parabolic(setup(0.95, 6.0), default_params(), grid, &opts).unwrap();
        let slow = run_parabolic(setup(0.8, 0.6), default_params(), grid, &opts).unwrap();
        assert!(gentle.peak_centerline < base.peak_centerline);
        assert!(slow.homogenized.unwrap() < base.homogenized.unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = model(8);
        assert!(m.run(Some(&[20.0; 5]), &short(1.0)).is_err());
        let bad = ParabolicOptions { tau_step: 0.0, ..short(1.0) };
        assert!(m.run(None, &bad).is_err());
        assert!(ParabolicModel::new(setup(0.4, 6.0), default_params(), Grid { n: 8 }).is_err());
    }
}
