//! Per-interval collocation steps and the scalar fixed-point problems they reduce to.

mod fixed_point;
mod stepper;

pub use fixed_point::{example1_fixed_point, fixed_point_example1, fixed_point_general};
pub use stepper::{solve_fixed_mesh, solve_steps, step_case1, step_case2, FixedMeshOutcome, StepResult, Stepper};

use serde::{Deserialize, Serialize};

use crate::config::{FixedPointControls, FixedPointStrategy};
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;

/// `y = G(alpha + beta*y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepEquation {
    pub alpha: f64,
    pub beta: f64,
}

impl StepEquation {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let eq = Self { alpha, beta };
        eq.validate()?;
        Ok(eq)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig(format!("beta must be finite and > 0, got {}", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StepOutcome {
    /// The interval's coefficients `Z_{n,1..m}`.
    Solved(Vec<f64>),
    NoFixedPoint,
    Diverged(String),
}

impl StepOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, Self::Solved(_))
    }
}

/// Dispatches to the closed form when allowed and available.
pub fn solve_equation(
    eq: StepEquation,
    g: &Nonlinearity,
    strategy: FixedPointStrategy,
    controls: &FixedPointControls,
    prior_max: f64,
) -> Result<StepOutcome> {
    eq.validate()?;
    if strategy == FixedPointStrategy::PreferAnalytic {
        if let Some(root) = g.analytic_fixed_point(eq.alpha, eq.beta) {
            return Ok(match root {
                Some(y) => StepOutcome::Solved(vec![y]),
                None => StepOutcome::NoFixedPoint,
            });
        }
    }
    fixed_point_general(eq, g, controls, prior_max)
}
