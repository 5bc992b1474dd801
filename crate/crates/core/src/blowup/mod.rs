//! Blow-up time estimation by step halving, parameter sweeps and curve intersections.

mod intersect;
mod sweep;

pub use intersect::{intersect_curves, Crossing, Intersection};
pub use sweep::{parameter_grid, sweep_parameter, Curve, RowStatus, SweepRecord, SweepRow, SweepSummary};

use serde::{Deserialize, Serialize};

use crate::catalog::Problem;
use crate::config::CollocationConfig;
use crate::error::Result;
use crate::quadrature::QuadratureRule;
use crate::solution::CollocationSolution;
use crate::solver::{StepOutcome, Stepper};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BlowUpStatus {
    /// The stepsize fell below the tolerance; `estimate` is the sum of accepted steps.
    BlowUp { estimate: f64 },
    /// Every step up to the horizon succeeded.
    ReachedHorizon { time: f64 },
    /// Quadrature or fixed-point iteration failed on `interval`.
    NumericFailure { interval: usize, detail: String },
    /// Not even the first interval admits a nonzero coefficient, so only the
    /// trivial solution is available.
    NoNontrivialSolution,
}

/// One accepted interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub start: f64,
    pub step: f64,
    pub max_coefficient: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlowUpReport {
    pub status: BlowUpStatus,
    pub steps: Vec<StepRecord>,
    pub halvings: usize,
    pub final_stepsize: f64,
    /// Case 2 intervals flagged by the positivity check.
    pub positivity_warnings: Vec<usize>,
}

impl BlowUpReport {
    pub fn estimate(&self) -> Option<f64> {
        match self.status {
            BlowUpStatus::BlowUp { estimate } => Some(estimate),
            _ => None,
        }
    }

    /// Time reached by the accepted steps.
    pub fn end_time(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.start + s.step)
    }

    pub fn accepted_steps(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.step).collect()
    }
}

/// Runs the adaptive algorithm: on a missing fixed point the step is
/// multiplied by the halving factor and retried from the same node; the
/// reduced step is kept for later intervals.
pub fn estimate_blowup(problem: &Problem, config: &CollocationConfig) -> Result<BlowUpReport> {
    estimate_blowup_with(problem, config, &QuadratureRule::default()).map(|(r, _)| r)
}

/// [`estimate_blowup`] with an explicit rule, also returning the solution.
pub fn estimate_blowup_with(
    problem: &Problem,
    config: &CollocationConfig,
    rule: &QuadratureRule,
) -> Result<(BlowUpReport, CollocationSolution)> {
    let stepper = Stepper::new(problem, config)?.with_rule(rule.clone());
    let mut lag = stepper.empty_lag();
    let mut h = config.initial_stepsize;
    let mut prior_max: f64 = 0.0;
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    let mut halvings = 0;

    let status = loop {
        if lag.end() >= config.horizon {
            break BlowUpStatus::ReachedHorizon { time: lag.end() };
        }
        let interval = lag.len();
        let result = match stepper.step(&lag, h, prior_max) {
            Ok(r) => r,
            Err(e) => break BlowUpStatus::NumericFailure { interval, detail: e.to_string() },
        };
        match result.outcome {
            StepOutcome::Solved(z) => {
                let max_z = z.iter().copied().fold(0.0, f64::max);
                prior_max = prior_max.max(max_z);
                if result.positivity_warning {
                    warnings.push(interval);
                }
                steps.push(StepRecord { start: lag.end(), step: h, max_coefficient: max_z });
                lag.push(h, z)?;
            }
            StepOutcome::NoFixedPoint => {
                h *= config.halving_factor;
                halvings += 1;
                if h < config.step_tolerance {
                    break if lag.is_empty() {
                        BlowUpStatus::NoNontrivialSolution
                    } else {
                        BlowUpStatus::BlowUp { estimate: lag.end() }
                    };
                }
            }
            StepOutcome::Diverged(detail) => break BlowUpStatus::NumericFailure { interval, detail },
        }
    };

    let solution = CollocationSolution::new(config.case, problem.kernel.clone(), lag, warnings.clone());
    let report = BlowUpReport { status, steps, halvings, final_stepsize: h, positivity_warnings: warnings };
    Ok((report, solution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Example;
    use crate::config::CollocationCase;
    use crate::kernel::Kernel;
    use crate::nonlinearity::Nonlinearity;

    #[test]
    fn example1_blows_up_near_three() {
        let cfg = CollocationConfig::new(CollocationCase::radau_one(), 0.1);
        let r = estimate_blowup(&Example::One.problem(), &cfg).unwrap();
        let t = r.estimate().unwrap();
        assert!((t - 3.0).abs() < 0.05, "{t}");
        assert!(r.final_stepsize < 1e-12);
        let sum: f64 = r.accepted_steps().iter().sum();
        assert!((sum - t).abs() < 1e-12);
        assert!(r.steps.windows(2).all(|w| w[1].start > w[0].start));
    }

    #[test]
    fn steps_never_grow_back() {
        let cfg = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let r = estimate_blowup(&Example::One.problem(), &cfg).unwrap();
        assert!(r.steps.windows(2).all(|w| w[1].step <= w[0].step));
    }

    #[test]
    fn sublinear_growth_reaches_horizon() {
        let p = Problem::new("sqrt", Kernel::one(), Nonlinearity::power(0.5));
        let cfg = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1).with_horizon(10.0);
        let r = estimate_blowup(&p, &cfg).unwrap();
        assert!(matches!(r.status, BlowUpStatus::ReachedHorizon { .. }), "{:?}", r.status);
        assert_eq!(r.halvings, 0);
    }

    #[test]
    fn linear_nonlinearity_has_only_the_trivial_solution() {
        let p = Problem::new("linear", Kernel::one(), Nonlinearity::new("y", |y| y));
        let cfg = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let r = estimate_blowup(&p, &cfg).unwrap();
        assert_eq!(r.status, BlowUpStatus::NoNontrivialSolution);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn numeric_failures_are_reported_not_raised() {
        let p = Problem::new("nan", Kernel::one(), Nonlinearity::new("nan", |y: f64| if y > 0.5 { f64::NAN } else { y.sqrt() }));
        let cfg = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let r = estimate_blowup(&p, &cfg).unwrap();
        assert!(matches!(r.status, BlowUpStatus::NumericFailure { .. }), "{:?}", r.status);
    }
}
