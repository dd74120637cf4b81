//! Safeguarded bisection/secant root finding on a sign-changing bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Required |f(root)|.
    pub residual_tol: f64,
    /// Bracket width at which iteration stops.
    pub x_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            residual_tol: 1e-9,
            x_tol: 1e-13,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` inside `[lo, hi]`.
///
/// Secant steps through the two latest iterates are taken while they land
/// inside the bracket; a secant step shorter than the tolerance is stretched
/// to the tolerance so the far end of the bracket collapses. If two
/// consecutive secant steps fail to halve the bracket, the next step is a
/// bisection, so the bracket shrinks geometrically however badly the secant
/// model fits.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }

    // latest two iterates for the secant model
    let (mut x_prev, mut f_prev) = (a, fa);
    let (mut x_cur, mut f_cur) = (b, fb);
    let mut secant_run = 0;
    let mut width_at_check = b - a;

    for iteration in 1..=opts.max_iterations {
        let tol = 0.5 * opts.x_tol * (1.0 + x_cur.abs());
        let mut x_new = f64::NAN;
        if secant_run < 2 && f_cur != f_prev {
            let mut secant = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev);
            if (secant - x_cur).abs() < tol {
                secant = if 0.5 * (a + b) > x_cur { x_cur + tol } else { x_cur - tol };
            }
            if secant > a && secant < b {
                x_new = secant;
                secant_run += 1;
            }
        }
        if x_new.is_nan() {
            x_new = 0.5 * (a + b);
            secant_run = 0;
            width_at_check = b - a;
        }
        let f_new = f(x_new);

        if f_new == 0.0 {
            return Ok(Root { x: x_new, residual: 0.0, iterations: iteration });
        }
        if f_new.signum() == fa.signum() {
            a = x_new;
            fa = f_new;
        } else {
            b = x_new;
            fb = f_new;
        }
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = x_new;
        f_cur = f_new;

        let width = b - a;
        if secant_run == 2 && width <= 0.5 * width_at_check {
            secant_run = 0;
            width_at_check = width;
        }

        if width <= opts.x_tol * (1.0 + x_cur.abs()) {
            let (x, fx) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
            if fx.abs() <= opts.residual_tol {
                return Ok(Root { x, residual: fx.abs(), iterations: iteration });
            }
            return Err(Error::RootNonConvergence {
                iterations: iteration,
                residual: fx.abs(),
            });
        }
    }
    Err(Error::RootNonConvergence {
        iterations: opts.max_iterations,
        residual: fa.abs().min(fb.abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.iterations < 20, "{} iterations", r.iterations);
    }

    #[test]
    fn flat_function_still_converges_by_bisection() {
        // x^9 is very flat near the root; secant crawls, bisection must take over
        let r = find_root(|x: f64| x.powi(9), -1.0, 0.5, RootOptions::default()).unwrap();
        assert!(r.x.abs() < 1e-3);
        assert!(r.iterations <= 200);
    }

    #[test]
    fn missing_sign_change() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, RootOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn endpoint_root() {
        let r = find_root(|x| x - 1.0, 1.0, 3.0, RootOptions::default()).unwrap();
        assert_eq!(r.x, 1.0);
    }

    #[test]
    fn discontinuous_sign_change_is_not_a_root() {
        let err = find_root(|x| if x < 0.3 { -1.0 } else { 1.0 }, 0.0, 1.0, RootOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::RootNonConvergence { .. }));
    }
}
