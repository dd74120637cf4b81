//! Dynamometer pressure fits and the single-sheet displacement curve.
//!
//! Displacements are in mm and pressures in MPa inside this module; only
//! [`thickness_from_threshold`] converts to metres.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{find_root, RootOptions};

/// `P(x) = amplitude * y^exponent_num / (const_den + coeff_den * y^exponent_den)`
/// with `y = max(0, x + shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureFit {
    pub amplitude: f64,
    /// mm
    pub shift: f64,
    pub exponent_num: f64,
    pub const_den: f64,
    pub coeff_den: f64,
    pub exponent_den: f64,
}

/// Press disk alone, no fabric.
pub const P_BASE: PressureFit = PressureFit {
    amplitude: 5461.352911,
    shift: 0.0,
    exponent_num: 2.92599,
    const_den: 0.0038158166,
    coeff_den: 6.4490865,
    exponent_den: 1.624481,
};

/// Press disk with ten stacked fabric sheets.
pub const P_BASE_10_FABRIC: PressureFit = PressureFit {
    amplitude: 716.33893,
    shift: 0.9703,
    exponent_num: 12.67189680,
    const_den: 14.10752,
    coeff_den: 0.92219399,
    exponent_den: 30.037944,
};

/// Pressure residual accepted by [`solve_w_of_x`], MPa.
pub const TOL_PRESSURE: f64 = 1e-9;

impl PressureFit {
    pub fn validate(&self) -> Result<()> {
        if !(self.const_den > 0.0) {
            return Err(Error::validation("fit.const_den", "must be positive"));
        }
        if !(self.exponent_num > 0.0) {
            return Err(Error::validation("fit.exponent_num", "must be positive"));
        }
        Ok(())
    }

    /// Pressure in MPa at total displacement `x` in mm.
    pub fn eval(&self, x: f64) -> f64 {
        let y = (x + self.shift).max(0.0);
        if y == 0.0 {
            return 0.0;
        }
        self.amplitude * y.powf(self.exponent_num)
            / (self.const_den + self.coeff_den * y.powf(self.exponent_den))
    }

    /// Displacement at which the fit peaks, when the denominator eventually
    /// dominates (`exponent_den > exponent_num`).
    pub fn peak_displacement(&self) -> Option<f64> {
        let growth = self.exponent_den - self.exponent_num;
        if growth <= 0.0 {
            return None;
        }
        let y = (self.exponent_num * self.const_den / (self.coeff_den * growth))
            .powf(1.0 / self.exponent_den);
        Some(y - self.shift)
    }
}

pub fn eval_fit(fit: &PressureFit, x: f64) -> f64 {
    fit.eval(x)
}

/// Fabric displacement `w` (mm) balancing the stacked and bare fits at total
/// displacement `x`: `P_base+10fabric(x) = P_base(x - w)`.
pub fn solve_w_of_x(x: f64) -> Result<f64> {
    let target = P_BASE_10_FABRIC.eval(x);
    if !(target > 0.0) {
        return Err(Error::NoBracket { lo: x - 1.0, hi: x });
    }
    let residual = |w: f64| target - P_BASE.eval(x - w);
    // w = x means zero press displacement; one millimetre of press travel
    // already exceeds the stacked peak pressure.
    let root = find_root(
        residual,
        x - 1.0,
        x,
        RootOptions {
            residual_tol: TOL_PRESSURE,
            ..RootOptions::default()
        },
    )?;
    Ok(root.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SheetPoint {
    /// Total displacement, mm.
    pub x: f64,
    /// Displacement of one sheet, mm (`w / 10`).
    pub w_single: f64,
    /// MPa
    pub pressure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleFailure {
    pub x: f64,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SingleSheetCurve {
    pub points: Vec<SheetPoint>,
    pub failures: Vec<SampleFailure>,
}

/// Builds the single-sheet displacement/pressure curve, one solve per
/// sample. Failed samples are reported, not fatal.
pub fn single_sheet_curve(x_samples: &[f64]) -> SingleSheetCurve {
    let mut curve = SingleSheetCurve::default();
    for &x in x_samples {
        match solve_w_of_x(x) {
            Ok(w) => curve.points.push(SheetPoint {
                x,
                w_single: w / 10.0,
                pressure: P_BASE_10_FABRIC.eval(x),
            }),
            Err(e) => curve.failures.push(SampleFailure {
                x,
                message: e.to_string(),
            }),
        }
    }
    curve
}

/// Per-sheet thickness (m) from the displacement at which a stacked fit
/// starts rising.
pub fn thickness_from_threshold(fit: &PressureFit, sheets: u32) -> Result<f64> {
    if sheets == 0 {
        return Err(Error::validation("sheets", "must be at least 1"));
    }
    Ok(fit.shift / sheets as f64 * 1e-3)
}

/// `n` evenly spaced samples on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}
