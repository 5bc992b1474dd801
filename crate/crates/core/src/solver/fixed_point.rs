use crate::config::FixedPointControls;
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;

use super::{StepEquation, StepOutcome};

// Smallest point of the bracketing scan used when alpha = 0.
const SCAN_START: f64 = 1e-300;
const BISECTION_STEPS: usize = 200;
const GOLDEN_STEPS: usize = 200;
// A tangential touch of zero closer than this (relative) counts as a root.
const TOUCH_TOL: f64 = 1e-12;

/// The attracting fixed point of `y -> G(alpha + beta*y)`, by iteration from 0.
///
/// When `alpha = 0` iteration cannot leave the trivial root, so the smallest
/// positive crossing of `G(beta*y) - y` from above is bracketed on the scan
/// `y = 2^k * 1e-300` and bisected instead. If the iteration is still climbing
/// when `max_iterations` runs out, the same bracketing is tried between the
/// last iterate and the cap.
pub fn fixed_point_general(
    eq: StepEquation,
    g: &Nonlinearity,
    controls: &FixedPointControls,
    prior_max: f64,
) -> Result<StepOutcome> {
    eq.validate()?;
    let StepEquation { alpha, beta } = eq;
    let phi = |y: f64| g.evaluate(alpha + beta * y) - y;
    let g_alpha = checked(g.evaluate(alpha), alpha)?;
    let cap = controls
        .divergence_cap_floor
        .max(controls.divergence_cap_factor * prior_max.max(g_alpha));

    if alpha == 0.0 {
        return scan_and_bisect(&phi, SCAN_START, cap, controls.convergence_tol);
    }

    let mut y = 0.0;
    let mut increasing = true;
    for _ in 0..controls.max_iterations {
        let next = g.evaluate(alpha + beta * y);
        if next.is_nan() {
            return Err(Error::NonFinite { what: "nonlinearity", point: alpha + beta * y });
        }
        if next > cap {
            return Ok(StepOutcome::NoFixedPoint);
        }
        if (next - y).abs() <= controls.convergence_tol * next.abs().max(1.0) {
            return Ok(StepOutcome::Solved(vec![next]));
        }
        increasing &= next > y;
        y = next;
    }
    if !increasing {
        return Ok(StepOutcome::Diverged(format!(
            "no convergence after {} iterations (last iterate {y})",
            controls.max_iterations
        )));
    }
    // phi(y) > 0 here because the iterates are still rising.
    scan_and_bisect(&phi, y, cap, controls.convergence_tol)
}

/// Looks for the first `+ -> -` sign change of `phi` on a geometric scan
/// above `start` and bisects it. A dip of `phi` that reaches zero without
/// crossing it (a double root) is located by golden-section search and
/// accepted when `phi` there is within `TOUCH_TOL` of zero.
fn scan_and_bisect(phi: &impl Fn(f64) -> f64, start: f64, cap: f64, tol: f64) -> Result<StepOutcome> {
    let eval = |u: f64| {
        let v = phi(u);
        if v.is_nan() {
            Err(Error::NonFinite { what: "nonlinearity", point: u })
        } else {
            Ok(v)
        }
    };
    let from_iterate = start > SCAN_START;
    let base = start.max(SCAN_START);
    let mut step = base.max(1.0) * 1e-12;
    let mut hi = if from_iterate { base + step } else { base };
    let mut lo = base;
    let mut seen_positive = false;
    // The two previous positive samples, for spotting a local minimum.
    let mut prev: Option<(f64, f64)> = None;
    let mut prev2: Option<(f64, f64)> = None;
    loop {
        let v = eval(hi)?;
        if v <= 0.0 && seen_positive {
            break;
        }
        if v > 0.0 {
            if let (Some((u2, v2)), Some((_, v1))) = (prev2, prev) {
                if v1 < v2 && v > v1 {
                    let (um, vm) = golden_minimum(&eval, u2, hi)?;
                    if vm <= 0.0 {
                        lo = u2;
                        hi = um;
                        break;
                    }
                    if vm <= TOUCH_TOL * um.max(1.0) {
                        return Ok(StepOutcome::Solved(vec![um]));
                    }
                }
            }
            seen_positive = true;
            lo = hi;
            prev2 = prev;
            prev = Some((hi, v));
        }
        if hi > cap {
            return Ok(StepOutcome::NoFixedPoint);
        }
        if from_iterate {
            step *= 2.0;
            hi = base + step;
        } else {
            hi *= 2.0;
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol * hi.max(1.0) * 1e-2 {
            break;
        }
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(StepOutcome::Solved(vec![0.5 * (lo + hi)]))
}

fn golden_minimum(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_STEPS {
        if f1 <= 0.0 {
            return Ok((x1, f1));
        }
        if f2 <= 0.0 {
            return Ok((x2, f2));
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
        if b - a <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

fn checked(v: f64, at: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::NonFinite { what: "nonlinearity", point: at })
    } else {
        Ok(v)
    }
}

/// Closed-form fixed point for the first example's nonlinearity.
pub fn fixed_point_example1(eq: StepEquation) -> Result<StepOutcome> {
    eq.validate()?;
    Ok(match example1_fixed_point(eq.alpha, eq.beta) {
        Some(y) => StepOutcome::Solved(vec![y]),
        None => StepOutcome::NoFixedPoint,
    })
}

/// The attracting fixed point of `y -> G(alpha + beta*y)` with
/// `G(y) = sqrt(y)` on `[0, 1]` and `y^2` beyond, or `None`.
///
/// Below the breakpoint the fixed point solves `y^2 = alpha + beta*y`; above
/// it `x = alpha + beta*y` solves `beta x^2 - x + alpha = 0` and `y = x^2`.
/// The upper root is only admissible when `x >= 1`. At `alpha = 0` the
/// nonzero root is `y = beta`, which exists for `beta <= 1`.
pub fn example1_fixed_point(alpha: f64, beta: f64) -> Option<f64> {
    if !(alpha >= 0.0 && beta > 0.0) {
        return None;
    }
    if alpha == 0.0 {
        return (beta <= 1.0).then_some(beta);
    }
    if alpha < 1.0 && beta <= 1.0 - alpha {
        return Some(0.5 * (beta + (beta * beta + 4.0 * alpha).sqrt()));
    }
    let disc = 1.0 - 4.0 * alpha * beta;
    if disc < 0.0 {
        return None;
    }
    // (1 - sqrt(disc)) / (2 beta), rationalised
    let x = 2.0 * alpha / (1.0 + disc.sqrt());
    (x >= 1.0).then_some(x * x)
}
