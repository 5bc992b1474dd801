//! Grid-based checks of the standing assumptions on `K` and `G`.
//!
//! A `Pass` only says no sampled point violated the condition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lagrange::CollocationParams;
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::{partial_coefficient_integral, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `K(t, s) >= 0` for `0 <= s < t`.
    KernelNonNegative,
    /// `t -> int_0^t K(t, s) ds` strictly increasing.
    KernelIntegralIncreasing,
    /// `int_a^t K(t, s) ds -> 0` as `t -> a+`.
    KernelLocalIntegralVanishes,
    /// `G(0) = 0`.
    NonlinearityVanishesAtZero,
    /// `G` strictly increasing and non-negative.
    NonlinearityIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub status: CheckStatus,
    /// Coordinates of the offending sample (`[t, s]` or `[y]`).
    pub witness: Option<Vec<f64>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn get(&self, condition: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationGrid {
    /// Times `t > 0` for the kernel checks, ascending.
    pub times: Vec<f64>,
    /// Points `y > 0` for the nonlinearity checks, ascending.
    pub values: Vec<f64>,
    /// Halvings of `t - a` in the local-integral check.
    pub halvings: u32,
    /// Level the local integral must fall below.
    pub local_tolerance: f64,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        Self {
            times: (1..=50).map(|k| 0.2 * k as f64).collect(),
            values: (1..=1000).map(|k| 0.1 * k as f64).collect(),
            halvings: 40,
            local_tolerance: 1e-5,
        }
    }
}

fn pass(condition: Condition, note: impl Into<String>) -> ConditionCheck {
    ConditionCheck { condition, status: CheckStatus::Pass, witness: None, note: note.into() }
}

fn fail(condition: Condition, witness: Vec<f64>, note: impl Into<String>) -> ConditionCheck {
    ConditionCheck { condition, status: CheckStatus::Fail, witness: Some(witness), note: note.into() }
}

/// Runs every check on the grid.
pub fn validate_general_conditions(
    kernel: &Kernel,
    g: &Nonlinearity,
    grid: &ValidationGrid,
) -> Result<ValidationReport> {
    if grid.times.is_empty() || grid.values.is_empty() {
        return Err(Error::InvalidConfig("validation grid is empty".into()));
    }
    let rule = QuadratureRule::default();
    let checks = vec![
        kernel_non_negative(kernel, &grid.times)?,
        kernel_integral_increasing(kernel, &grid.times, &rule)?,
        kernel_local_integral(kernel, grid, &rule)?,
        g_zero(g)?,
        g_increasing(g, &grid.values)?,
    ];
    Ok(ValidationReport { checks })
}

fn finite(v: f64, what: &'static str, point: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::NonFinite { what, point })
    } else {
        Ok(v)
    }
}

fn kernel_non_negative(kernel: &Kernel, times: &[f64]) -> Result<ConditionCheck> {
    const C: Condition = Condition::KernelNonNegative;
    for &t in times {
        for k in 0..20 {
            let s = t * k as f64 / 20.0;
            let v = finite(kernel.evaluate(t, s), "kernel", t)?;
            if v < 0.0 {
                return Ok(fail(C, vec![t, s], format!("K({t}, {s}) = {v}")));
            }
        }
    }
    Ok(pass(C, "no negative sample"))
}

/// `int_0^t K(t, s) ds`, through the same quadrature the solver uses.
fn kernel_integral(kernel: &Kernel, a: f64, t: f64, rule: &QuadratureRule) -> Result<f64> {
    let one = CollocationParams::new(&[1.0])?;
    partial_coefficient_integral(kernel, a, t - a, &one, 1.0, 0, rule).map(|b| b * (t - a))
}

fn kernel_integral_increasing(kernel: &Kernel, times: &[f64], rule: &QuadratureRule) -> Result<ConditionCheck> {
    const C: Condition = Condition::KernelIntegralIncreasing;
    let mut prev = 0.0;
    for &t in times {
        let v = finite(kernel_integral(kernel, 0.0, t, rule)?, "kernel integral", t)?;
        if v <= prev {
            return Ok(fail(C, vec![t], format!("int_0^t K = {v} does not exceed {prev}")));
        }
        prev = v;
    }
    Ok(pass(C, "strictly increasing on the grid"))
}

fn kernel_local_integral(kernel: &Kernel, grid: &ValidationGrid, rule: &QuadratureRule) -> Result<ConditionCheck> {
    const C: Condition = Condition::KernelLocalIntegralVanishes;
    let starts = [0.0, grid.times[grid.times.len() / 2], *grid.times.last().expect("non-empty")];
    for a in starts {
        let mut d = 1.0;
        let mut prev = f64::INFINITY;
        for _ in 0..=grid.halvings {
            let v = finite(kernel_integral(kernel, a, a + d, rule)?, "kernel integral", a + d)?;
            if v > prev {
                return Ok(fail(C, vec![a, a + d], format!("local integral grew to {v} as t - a shrank")));
            }
            prev = v;
            d *= 0.5;
        }
        if prev > grid.local_tolerance {
            return Ok(ConditionCheck {
                condition: C,
                status: CheckStatus::Inconclusive,
                witness: Some(vec![a]),
                note: format!("decreasing but still {prev} after {} halvings", grid.halvings),
            });
        }
    }
    Ok(pass(C, "decreases below tolerance"))
}

fn g_zero(g: &Nonlinearity) -> Result<ConditionCheck> {
    const C: Condition = Condition::NonlinearityVanishesAtZero;
    let v = finite(g.evaluate(0.0), "nonlinearity", 0.0)?;
    Ok(if v == 0.0 { pass(C, "G(0) = 0") } else { fail(C, vec![0.0], format!("G(0) = {v}")) })
}

fn g_increasing(g: &Nonlinearity, values: &[f64]) -> Result<ConditionCheck> {
    const C: Condition = Condition::NonlinearityIncreasing;
    let mut prev = finite(g.evaluate(0.0), "nonlinearity", 0.0)?;
    for &y in values {
        let v = finite(g.evaluate(y), "nonlinearity", y)?;
        if v < 0.0 {
            return Ok(fail(C, vec![y], format!("G({y}) = {v} is negative")));
        }
        if v <= prev {
            return Ok(fail(C, vec![y], format!("G({y}) = {v} does not exceed the previous sample {prev}")));
        }
        prev = v;
    }
    Ok(pass(C, "strictly increasing on the grid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Example;

    #[test]
    fn catalog_passes() {
        for e in Example::ALL {
            let r = validate_general_conditions(&e.kernel(), &e.nonlinearity(), &ValidationGrid::default()).unwrap();
            assert!(r.all_pass(), "example {}: {:?}", e.number(), r.checks);
        }
    }

    #[test]
    fn negative_kernel_fails() {
        let k = Kernel::convolution("minus one", |_| -1.0);
        let r = validate_general_conditions(&k, &Nonlinearity::example1(), &ValidationGrid::default()).unwrap();
        let c = r.get(Condition::KernelNonNegative).unwrap();
        assert_eq!(c.status, CheckStatus::Fail);
        assert!(c.witness.is_some());
    }

    #[test]
    fn shifted_nonlinearity_fails_at_zero() {
        let g = Nonlinearity::new("y + 1", |y| y + 1.0);
        let r = validate_general_conditions(&Kernel::one(), &g, &ValidationGrid::default()).unwrap();
        assert_eq!(r.get(Condition::NonlinearityVanishesAtZero).unwrap().status, CheckStatus::Fail);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn nan_is_a_diagnostic() {
        let g = Nonlinearity::new("nan", |y: f64| if y > 5.0 { f64::NAN } else { y });
        let err = validate_general_conditions(&Kernel::one(), &g, &ValidationGrid::default()).unwrap_err();
        assert!(matches!(err, Error::NonFinite { point, .. } if point > 5.0));
    }

    #[test]
    fn empty_grid_rejected() {
        let grid = ValidationGrid { times: vec![], ..ValidationGrid::default() };
        assert!(validate_general_conditions(&Kernel::one(), &Nonlinearity::example1(), &grid).is_err());
    }
}
