//! Collocation and fixed-point configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagrange::CollocationParams;

/// The two collocation families that reduce each step to one scalar equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CollocationCase {
    /// `m = 1` with a single parameter `c_1 > 0`.
    Case1 { c1: f64 },
    /// `m = 2` with `c_1 = 0` and `c_2 > 0`.
    Case2 { c2: f64 },
}

impl CollocationCase {
    /// Radau I points `{0, 2/3}`.
    pub fn radau_one() -> Self {
        Self::Case2 { c2: 2.0 / 3.0 }
    }

    pub fn kind(&self) -> CaseKind {
        match self {
            Self::Case1 { .. } => CaseKind::Case1,
            Self::Case2 { .. } => CaseKind::Case2,
        }
    }

    /// The free parameter (`c_1` in case 1, `c_2` in case 2).
    pub fn parameter(&self) -> f64 {
        match *self {
            Self::Case1 { c1 } => c1,
            Self::Case2 { c2 } => c2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (name, c) = match *self {
            Self::Case1 { c1 } => ("c1", c1),
            Self::Case2 { c2 } => ("c2", c2),
        };
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1], got {c}")));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<CollocationParams> {
        self.validate()?;
        match *self {
            Self::Case1 { c1 } => CollocationParams::new(&[c1]),
            Self::Case2 { c2 } => CollocationParams::new(&[0.0, c2]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    Case1,
    Case2,
}

impl CaseKind {
    pub fn with_parameter(self, c: f64) -> CollocationCase {
        match self {
            Self::Case1 => CollocationCase::Case1 { c1: c },
            Self::Case2 => CollocationCase::Case2 { c2: c },
        }
    }
}

/// Controls for the iterative fixed-point solver.
///
/// The divergence cap is `max(cap_floor, cap_factor * max(prior_max, G(alpha)))`,
/// where `prior_max` is the largest coefficient accepted so far.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointControls {
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub divergence_cap_factor: f64,
    pub divergence_cap_floor: f64,
}

impl Default for FixedPointControls {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            convergence_tol: 1e-14,
            divergence_cap_factor: 100.0,
            divergence_cap_floor: 1e6,
        }
    }
}

impl FixedPointControls {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.convergence_tol > 0.0
            && self.divergence_cap_factor > 0.0
            && self.divergence_cap_floor > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig("fixed-point controls must be strictly positive".into()))
        }
    }
}

/// Which per-step solver to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointStrategy {
    /// Closed form when the nonlinearity provides one, iteration otherwise.
    #[default]
    PreferAnalytic,
    /// Always iterate.
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollocationConfig {
    pub case: CollocationCase,
    pub initial_stepsize: f64,
    pub horizon: f64,
    pub step_tolerance: f64,
    pub halving_factor: f64,
    pub fixed_point: FixedPointControls,
    pub strategy: FixedPointStrategy,
}

impl CollocationConfig {
    pub fn new(case: CollocationCase, initial_stepsize: f64) -> Self {
        Self {
            case,
            initial_stepsize,
            horizon: 100.0,
            step_tolerance: 1e-12,
            halving_factor: 0.5,
            fixed_point: FixedPointControls::default(),
            strategy: FixedPointStrategy::default(),
        }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_step_tolerance(mut self, tol: f64) -> Self {
        self.step_tolerance = tol;
        self
    }

    pub fn with_halving_factor(mut self, factor: f64) -> Self {
        self.halving_factor = factor;
        self
    }

    pub fn with_strategy(mut self, strategy: FixedPointStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_fixed_point_controls(mut self, controls: FixedPointControls) -> Self {
        self.fixed_point = controls;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.case.validate()?;
        self.fixed_point.validate()?;
        if !(self.initial_stepsize > 0.0 && self.initial_stepsize.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "initial stepsize must be positive, got {}",
                self.initial_stepsize
            )));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.step_tolerance > 0.0 && self.step_tolerance < self.initial_stepsize) {
            return Err(Error::InvalidConfig(format!(
                "step tolerance {} must lie in (0, initial stepsize)",
                self.step_tolerance
            )));
        }
        if !(self.halving_factor > 0.0 && self.halving_factor < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "halving factor must lie in (0, 1), got {}",
                self.halving_factor
            )));
        }
        Ok(())
    }
}
