//! Time-stepping kernels: an embedded Dormand–Prince 5(4) integrator for the
//! lumped models and a Thomas solver for the implicit diffusion steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepControl {
    pub rel_tol: f64,
    /// Absolute tolerance in state units (°C for every model here).
    pub abs_tol: f64,
    /// Cap on attempted steps, accepted plus rejected.
    pub max_steps: usize,
    /// First trial step in the integration variable; chosen automatically
    /// when absent.
    pub initial_step: Option<f64>,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rel_tol: 1e-8,
            abs_tol: 1e-8,
            max_steps: 1_000_000,
            initial_step: None,
        }
    }
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::validation("integrator.rel_tol", "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::validation("integrator.abs_tol", "must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::validation("integrator.max_steps", "must be at least 1"));
        }
        if let Some(h) = self.initial_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::validation("integrator.initial_step", "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// States sampled at the requested output points.
#[derive(Debug, Clone)]
pub struct Samples {
    pub points: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: SolverStats,
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Design order of the propagated solution.
pub const ORDER: u32 = 5;

struct Stepper<F> {
    rhs: F,
    dim: usize,
    k: [Vec<f64>; 7],
    stage: Vec<f64>,
    evals: usize,
}

impl<F> Stepper<F>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn new(rhs: F, dim: usize) -> Self {
        Stepper {
            rhs,
            dim,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            stage: vec![0.0; dim],
            evals: 0,
        }
    }

    fn eval(&mut self, x: f64, y: &[f64], slot: usize) -> Result<()> {
        self.evals += 1;
        (self.rhs)(x, y, &mut self.k[slot])
    }

    /// One trial step from (x, y) with k[0] = f(x, y) already set. Writes the
    /// fifth-order result to `y_new` and the error estimate to `err`; leaves
    /// f(x + h, y_new) in k[6].
    fn trial(&mut self, x: f64, y: &[f64], h: f64, y_new: &mut [f64], err: &mut [f64]) -> Result<()> {
        for s in 1..7 {
            for i in 0..self.dim {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * self.k[j][i];
                }
                self.stage[i] = y[i] + h * acc;
            }
            let stage = std::mem::take(&mut self.stage);
            let result = self.eval(x + C[s] * h, &stage, s);
            self.stage = stage;
            result?;
            if s == 6 {
                y_new.copy_from_slice(&self.stage);
            }
        }
        for i in 0..self.dim {
            let mut acc = 0.0;
            for s in 0..7 {
                acc += E[s] * self.k[s][i];
            }
            err[i] = h * acc;
        }
        Ok(())
    }
}

fn scaled_max(err: &[f64], y: &[f64], y_new: &[f64], control: &StepControl) -> f64 {
    err.iter()
        .zip(y.iter().zip(y_new))
        .map(|(e, (a, b))| e.abs() / (control.abs_tol + control.rel_tol * a.abs().max(b.abs())))
        .fold(0.0, f64::max)
}

/// Integrates `y' = rhs(x, y)` from `span.0` and returns the state at each
/// of `output_points` (ascending, inside the span).
///
/// Steps are shortened to land exactly on output points, so no
/// interpolation is involved. The per-step error estimate satisfies
/// `|e_i| <= abs_tol + rel_tol * |y_i|` on every accepted step.
pub fn integrate_adaptive<F>(
    rhs: F,
    span: (f64, f64),
    initial: &[f64],
    control: &StepControl,
    output_points: &[f64],
) -> Result<Samples>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    control.validate()?;
    let (x0, x_end) = span;
    if !(x_end > x0) {
        return Err(Error::validation("span", "end must exceed start"));
    }
    for pair in output_points.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::validation("output_points", "must be strictly increasing"));
        }
    }
    if let (Some(&first), Some(&last)) = (output_points.first(), output_points.last()) {
        if first < x0 || last > x_end {
            return Err(Error::validation("output_points", "must lie inside the span"));
        }
    }

    let dim = initial.len();
    let mut stepper = Stepper::new(rhs, dim);
    let mut y = initial.to_vec();
    let mut y_new = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let mut x = x0;
    let mut stats = SolverStats::default();
    let mut samples = Samples {
        points: Vec::with_capacity(output_points.len()),
        states: Vec::with_capacity(output_points.len()),
        stats,
    };

    stepper.eval(x, &y, 0)?;
    let mut h = match control.initial_step {
        Some(h) => h,
        None => initial_step(&mut stepper, x, &y, x_end - x0, control)?,
    };

    for &target in output_points {
        while x < target {
            let remaining = target - x;
            let hits_target = h >= remaining;
            let h_try = if hits_target { remaining } else { h };
            if stats.accepted + stats.rejected >= control.max_steps {
                return Err(Error::IntegrationNonConvergence {
                    x,
                    steps: stats.accepted + stats.rejected,
                    state: y,
                    reason: "step budget exhausted",
                });
            }
            if h_try <= 16.0 * f64::EPSILON * x.abs().max(1e-300) && !hits_target {
                return Err(Error::IntegrationNonConvergence {
                    x,
                    steps: stats.accepted + stats.rejected,
                    state: y,
                    reason: "step size underflow",
                });
            }
            stepper.trial(x, &y, h_try, &mut y_new, &mut err)?;
            let err_norm = scaled_max(&err, &y, &y_new, control);
            if err_norm.is_finite() && err_norm <= 1.0 {
                stats.accepted += 1;
                x = if hits_target { target } else { x + h_try };
                std::mem::swap(&mut y, &mut y_new);
                stepper.k.swap(0, 6);
                let factor = if err_norm == 0.0 {
                    5.0
                } else {
                    (0.9 * err_norm.powf(-1.0 / ORDER as f64)).clamp(0.2, 5.0)
                };
                // a step clipped to reach an output point says little about the
                // natural step length, so never shrink below the previous proposal
                h = if hits_target { h.max(h_try * factor) } else { h_try * factor };
            } else {
                stats.rejected += 1;
                let factor = if err_norm.is_finite() {
                    (0.9 * err_norm.powf(-1.0 / ORDER as f64)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h = h_try * factor;
            }
        }
        samples.points.push(target);
        samples.states.push(y.clone());
    }
    stats.rhs_evals = stepper.evals;
    samples.stats = stats;
    Ok(samples)
}

fn initial_step<F>(
    stepper: &mut Stepper<F>,
    x: f64,
    y: &[f64],
    span: f64,
    control: &StepControl,
) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let weight = |v: f64| control.abs_tol + control.rel_tol * v.abs();
    let d0 = y.iter().map(|&v| (v / weight(v)).abs()).fold(0.0, f64::max);
    let d1 = stepper.k[0]
        .iter()
        .zip(y)
        .map(|(&f, &v)| (f / weight(v)).abs())
        .fold(0.0, f64::max);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let probe: Vec<f64> = y.iter().zip(&stepper.k[0]).map(|(v, f)| v + h0 * f).collect();
    stepper.eval(x + h0, &probe, 1)?;
    let d2 = stepper.k[1]
        .iter()
        .zip(&stepper.k[0])
        .zip(y)
        .map(|((f1, f0), &v)| ((f1 - f0) / weight(v)).abs())
        .fold(0.0, f64::max)
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / ORDER as f64)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Fixed-step propagation with the fifth-order weights. Used to measure the
/// order of the pair; the models themselves always run adaptively.
pub fn integrate_fixed<F>(rhs: F, span: (f64, f64), initial: &[f64], steps: usize) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if steps == 0 {
        return Err(Error::validation("steps", "must be at least 1"));
    }
    let dim = initial.len();
    let mut stepper = Stepper::new(rhs, dim);
    let mut y = initial.to_vec();
    let mut y_new = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let h = (span.1 - span.0) / steps as f64;
    for n in 0..steps {
        let x = span.0 + n as f64 * h;
        stepper.eval(x, &y, 0)?;
        stepper.trial(x, &y, h, &mut y_new, &mut err)?;
        std::mem::swap(&mut y, &mut y_new);
    }
    Ok(y)
}

/// Tridiagonal system `lower[i] x[i-1] + diagonal[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn solve(&self) -> Result<Vec<f64>> {
        let mut x = self.rhs.clone();
        let mut scratch = Vec::new();
        thomas_in_place(&self.lower, &self.diagonal, &self.upper, &mut x, &mut scratch)?;
        Ok(x)
    }

    /// `A x`, for residual checks.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diagonal.len();
        (0..n)
            .map(|i| {
                let mut v = self.diagonal[i] * x[i];
                if i > 0 {
                    v += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

pub fn solve_tridiagonal(system: &TridiagonalSystem) -> Result<Vec<f64>> {
    system.solve()
}

/// Thomas elimination. `rhs` is overwritten with the solution; `scratch`
/// holds the modified super-diagonal and is resized as needed.
pub fn thomas_in_place(
    lower: &[f64],
    diagonal: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut Vec<f64>,
) -> Result<()> {
    let n = diagonal.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::validation(
            "tridiagonal",
            format!(
                "lengths must agree: lower {}, diagonal {n}, upper {}, rhs {}",
                lower.len(),
                upper.len(),
                rhs.len()
            ),
        ));
    }
    if n == 0 {
        return Ok(());
    }
    scratch.clear();
    scratch.resize(n, 0.0);

    let pivot = diagonal[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularPivot { index: 0 });
    }
    scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        let pivot = diagonal[i] - lower[i] * scratch[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularPivot { index: i });
        }
        scratch[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    Ok(())
}
