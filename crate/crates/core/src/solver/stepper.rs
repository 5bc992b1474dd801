use crate::catalog::Problem;
use crate::config::{CollocationCase, CollocationConfig};
use crate::error::{Error, Result};
use crate::lagrange::CollocationParams;
use crate::quadrature::{coefficient_integral, lag_term_after, LagState, QuadratureRule};
use crate::solution::CollocationSolution;

use super::{solve_equation, StepEquation, StepOutcome};

/// What one attempted step produced.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub outcome: StepOutcome,
    /// The scalar equation for the last unknown coefficient.
    pub equation: StepEquation,
    /// Case 2 only: set when `Z_{n,2} < (1 - c_2) Z_{n,1}`, i.e. the linear
    /// piece turns negative before the end of the interval.
    pub positivity_warning: bool,
}

/// Advances a collocation solution one interval at a time.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    problem: &'a Problem,
    config: &'a CollocationConfig,
    params: CollocationParams,
    rule: QuadratureRule,
}

impl<'a> Stepper<'a> {
    pub fn new(problem: &'a Problem, config: &'a CollocationConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { problem, config, params: config.case.params()?, rule: QuadratureRule::default() })
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn params(&self) -> &CollocationParams {
        &self.params
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn empty_lag(&self) -> LagState {
        LagState::new(self.params.clone())
    }

    /// Attempts the interval `[lag.end(), lag.end() + h]`.
    pub fn step(&self, lag: &LagState, h: f64, prior_max: f64) -> Result<StepResult> {
        if lag.params() != &self.params {
            return Err(Error::InvalidConfig("lag state built for different collocation parameters".into()));
        }
        match self.config.case {
            CollocationCase::Case1 { c1 } => self.step_case1(lag, c1, h, prior_max),
            CollocationCase::Case2 { c2 } => self.step_case2(lag, c2, h, prior_max),
        }
    }

    fn solve(&self, eq: StepEquation, prior_max: f64) -> Result<StepOutcome> {
        solve_equation(eq, &self.problem.nonlinearity, self.config.strategy, &self.config.fixed_point, prior_max)
    }

    fn step_case1(&self, lag: &LagState, c1: f64, h: f64, prior_max: f64) -> Result<StepResult> {
        let kernel = &self.problem.kernel;
        let alpha = lag_term_after(kernel, lag, c1 * h, &self.rule)?;
        let b = coefficient_integral(kernel, lag.end(), h, &self.params, 0, 0, &self.rule)?;
        let equation = StepEquation::new(alpha, h * b)?;
        let outcome = self.solve(equation, prior_max)?;
        Ok(StepResult { outcome, equation, positivity_warning: false })
    }

    fn step_case2(&self, lag: &LagState, c2: f64, h: f64, prior_max: f64) -> Result<StepResult> {
        let kernel = &self.problem.kernel;
        let g = &self.problem.nonlinearity;
        let f0 = lag_term_after(kernel, lag, 0.0, &self.rule)?;
        let z1 = g.evaluate(f0);
        if z1.is_nan() {
            return Err(Error::NonFinite { what: "nonlinearity", point: f0 });
        }
        let b21 = coefficient_integral(kernel, lag.end(), h, &self.params, 1, 0, &self.rule)?;
        let b22 = coefficient_integral(kernel, lag.end(), h, &self.params, 1, 1, &self.rule)?;
        let f2 = lag_term_after(kernel, lag, c2 * h, &self.rule)?;
        let alpha = f2 + h * b21 * z1;
        let equation = StepEquation { alpha, beta: h * b22 };
        if z1.is_infinite() || alpha.is_infinite() {
            return Ok(StepResult { outcome: StepOutcome::NoFixedPoint, equation, positivity_warning: false });
        }
        equation.validate()?;
        let outcome = match self.solve(equation, prior_max.max(z1))? {
            StepOutcome::Solved(v) => StepOutcome::Solved(vec![z1, v[0]]),
            other => other,
        };
        let positivity_warning = match &outcome {
            StepOutcome::Solved(z) => z[1] < (1.0 - c2) * z[0],
            _ => false,
        };
        Ok(StepResult { outcome, equation, positivity_warning })
    }
}

/// One case 1 step on `[lag.end(), lag.end() + h]` with the default quadrature.
pub fn step_case1(
    problem: &Problem,
    config: &CollocationConfig,
    lag: &LagState,
    h: f64,
    prior_max: f64,
) -> Result<StepResult> {
    if !matches!(config.case, CollocationCase::Case1 { .. }) {
        return Err(Error::InvalidConfig("step_case1 needs a case 1 configuration".into()));
    }
    Stepper::new(problem, config)?.step(lag, h, prior_max)
}

/// One case 2 step on `[lag.end(), lag.end() + h]` with the default quadrature.
pub fn step_case2(
    problem: &Problem,
    config: &CollocationConfig,
    lag: &LagState,
    h: f64,
    prior_max: f64,
) -> Result<StepResult> {
    if !matches!(config.case, CollocationCase::Case2 { .. }) {
        return Err(Error::InvalidConfig("step_case2 needs a case 2 configuration".into()));
    }
    Stepper::new(problem, config)?.step(lag, h, prior_max)
}

#[derive(Debug, Clone)]
pub enum FixedMeshOutcome {
    Solved(CollocationSolution),
    /// No fixed point on interval `interval`; `partial` holds the intervals before it.
    NoFixedPoint { interval: usize, partial: CollocationSolution },
}

/// Solves on the given mesh `0 = t_0 < t_1 < ... < t_N` without adapting it.
pub fn solve_fixed_mesh(problem: &Problem, config: &CollocationConfig, mesh: &[f64]) -> Result<FixedMeshOutcome> {
    if mesh.len() < 2 || mesh[0] != 0.0 {
        return Err(Error::InvalidConfig("mesh must start at 0 and contain at least two nodes".into()));
    }
    let steps: Vec<f64> = mesh.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::InvalidConfig("mesh must be strictly increasing".into()));
    }
    solve_steps(problem, config, &steps)
}

/// [`solve_fixed_mesh`] with the mesh given by its step sizes.
pub fn solve_steps(problem: &Problem, config: &CollocationConfig, steps: &[f64]) -> Result<FixedMeshOutcome> {
    let stepper = Stepper::new(problem, config)?;
    let mut lag = stepper.empty_lag();
    let mut warnings = Vec::new();
    let mut prior_max: f64 = 0.0;
    for (n, &h) in steps.iter().enumerate() {
        let result = stepper.step(&lag, h, prior_max)?;
        match result.outcome {
            StepOutcome::Solved(z) => {
                prior_max = z.iter().copied().fold(prior_max, f64::max);
                if result.positivity_warning {
                    warnings.push(n);
                }
                lag.push(h, z)?;
            }
            StepOutcome::NoFixedPoint => {
                let partial = CollocationSolution::new(config.case, problem.kernel.clone(), lag, warnings);
                return Ok(FixedMeshOutcome::NoFixedPoint { interval: n, partial });
            }
            StepOutcome::Diverged(detail) => return Err(Error::Step { interval: n, detail }),
        }
    }
    Ok(FixedMeshOutcome::Solved(CollocationSolution::new(config.case, problem.kernel.clone(), lag, warnings)))
}
