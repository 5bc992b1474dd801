//! Computed collocation solutions.

use crate::catalog::Problem;
use crate::config::CollocationCase;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lagrange::CollocationParams;
use crate::quadrature::{
    lag_term_after, partial_coefficient_integral, CompletedInterval, LagState, QuadratureRule,
};

/// A piecewise polynomial `z_h` on `0 = t_0 < ... < t_N`, determined by its
/// coefficients `Z_{n,j}` at the collocation points `t_n + c_j h_n`.
#[derive(Debug, Clone)]
pub struct CollocationSolution {
    case: CollocationCase,
    kernel: Kernel,
    lag: LagState,
    positivity_warnings: Vec<usize>,
}

impl CollocationSolution {
    pub fn new(case: CollocationCase, kernel: Kernel, lag: LagState, positivity_warnings: Vec<usize>) -> Self {
        Self { case, kernel, lag, positivity_warnings }
    }

    pub fn case(&self) -> CollocationCase {
        self.case
    }

    pub fn params(&self) -> &CollocationParams {
        self.lag.params()
    }

    pub fn intervals(&self) -> &[CompletedInterval] {
        self.lag.intervals()
    }

    pub fn len(&self) -> usize {
        self.lag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lag.is_empty()
    }

    /// `t_N`.
    pub fn end(&self) -> f64 {
        self.lag.end()
    }

    /// Mesh nodes `t_0, ..., t_N`.
    pub fn mesh(&self) -> Vec<f64> {
        let mut mesh: Vec<f64> = self.intervals().iter().map(|i| i.start).collect();
        mesh.push(self.end());
        mesh
    }

    pub fn coefficients(&self, n: usize) -> &[f64] {
        &self.intervals()[n].coefficients
    }

    /// Intervals whose case 2 linear piece turns negative before its right end.
    pub fn positivity_warnings(&self) -> &[usize] {
        &self.positivity_warnings
    }

    pub fn max_coefficient(&self) -> f64 {
        self.intervals().iter().flat_map(|i| i.coefficients.iter().copied()).fold(0.0, f64::max)
    }

    /// The interval holding `t`, with `t_n < t <= t_{n+1}` (and `t = 0` in the first).
    fn locate(&self, t: f64) -> Result<usize> {
        let intervals = self.intervals();
        if intervals.is_empty() || !(0.0..=self.end()).contains(&t) {
            return Err(Error::InvalidConfig(format!("t = {t} is outside [0, {}]", self.end())));
        }
        let n = intervals.partition_point(|i| i.end() < t);
        Ok(n.min(intervals.len() - 1))
    }

    /// `z_h(t)`.
    pub fn evaluate_z(&self, t: f64) -> Result<f64> {
        let n = self.locate(t)?;
        let iv = &self.intervals()[n];
        Ok(self.params().interpolate(&iv.coefficients, (t - iv.start) / iv.step))
    }

    /// `z_h` at `t_n + v h_n`, exact at the collocation points.
    pub fn evaluate_z_local(&self, n: usize, v: f64) -> f64 {
        self.params().interpolate(&self.intervals()[n].coefficients, v)
    }

    /// `y_h(t) = int_0^t K(t, s) z_h(s) ds`.
    pub fn evaluate_y(&self, t: f64, rule: &QuadratureRule) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let n = self.locate(t)?;
        let iv = &self.intervals()[n];
        let v = ((t - iv.start) / iv.step).clamp(0.0, 1.0);
        let mut head = self.lag.clone();
        head.truncate(n);
        let lag = lag_term_after(&self.kernel, &head, v * iv.step, rule)?;
        let mut own = 0.0;
        for (j, &z) in iv.coefficients.iter().enumerate() {
            own += z * partial_coefficient_integral(&self.kernel, iv.start, iv.step, self.params(), v, j, rule)?;
        }
        Ok(lag + iv.step * own)
    }

    /// Largest `|Z_{n,i} - G(F_n(t_{n,i}) + h_n sum_j B_n(i,j) Z_{n,j})|` over
    /// the collocation points of each interval.
    pub fn residuals(&self, problem: &Problem, rule: &QuadratureRule) -> Result<Vec<f64>> {
        let params = self.params();
        let mut head = LagState::new(params.clone());
        let mut out = Vec::with_capacity(self.len());
        for iv in self.intervals() {
            let mut worst: f64 = 0.0;
            for (i, &ci) in params.nodes().iter().enumerate() {
                let mut arg = lag_term_after(&problem.kernel, &head, ci * iv.step, rule)?;
                for (j, &z) in iv.coefficients.iter().enumerate() {
                    arg += iv.step
                        * z
                        * partial_coefficient_integral(&problem.kernel, iv.start, iv.step, params, ci, j, rule)?;
                }
                worst = worst.max((iv.coefficients[i] - problem.nonlinearity.evaluate(arg)).abs());
            }
            out.push(worst);
            head.push(iv.step, iv.coefficients.clone())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_solution() -> CollocationSolution {
        let mut lag = LagState::new(CollocationParams::new(&[0.5]).unwrap());
        lag.push(1.0, vec![2.0]).unwrap();
        lag.push(0.5, vec![4.0]).unwrap();
        CollocationSolution::new(CollocationCase::Case1 { c1: 0.5 }, Kernel::one(), lag, vec![])
    }

    #[test]
    fn z_is_piecewise_and_left_continuous() {
        let s = constant_solution();
        assert_eq!(s.evaluate_z(0.0).unwrap(), 2.0);
        assert_eq!(s.evaluate_z(1.0).unwrap(), 2.0);
        assert_eq!(s.evaluate_z(1.2).unwrap(), 4.0);
        assert!(s.evaluate_z(1.6).is_err());
        assert_eq!(s.mesh(), vec![0.0, 1.0, 1.5]);
    }

    #[test]
    fn y_integrates_z() {
        let s = constant_solution();
        let rule = QuadratureRule::default();
        assert!((s.evaluate_y(0.5, &rule).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.evaluate_y(1.25, &rule).unwrap() - 3.0).abs() < 1e-15);
        assert!((s.evaluate_y(1.5, &rule).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn linear_pieces_hit_stored_values() {
        let params = CollocationParams::new(&[0.0, 2.0 / 3.0]).unwrap();
        let mut lag = LagState::new(params);
        lag.push(0.1, vec![1.0, 3.0]).unwrap();
        let s = CollocationSolution::new(CollocationCase::radau_one(), Kernel::one(), lag, vec![]);
        assert_eq!(s.evaluate_z_local(0, 0.0), 1.0);
        assert_eq!(s.evaluate_z_local(0, 2.0 / 3.0), 3.0);
        assert_eq!(s.max_coefficient(), 3.0);
    }
}
