use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelForm, MomentQuery};
use crate::lagrange::CollocationParams;

use super::QuadratureRule;

/// One finished mesh interval `[start, start + step]` with its coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedInterval {
    pub start: f64,
    pub step: f64,
    pub coefficients: Vec<f64>,
}

impl CompletedInterval {
    pub fn end(&self) -> f64 {
        self.start + self.step
    }
}

/// The completed part of a collocation solution, as seen by the lag term.
#[derive(Debug, Clone, PartialEq)]
pub struct LagState {
    params: CollocationParams,
    intervals: Vec<CompletedInterval>,
    // Distance from each interval's right end to the current end, kept as a
    // running sum of steps so it is exact for the most recent intervals.
    end: f64,
}

impl LagState {
    pub fn new(params: CollocationParams) -> Self {
        Self { params, intervals: Vec::new(), end: 0.0 }
    }

    pub fn params(&self) -> &CollocationParams {
        &self.params
    }

    pub fn intervals(&self) -> &[CompletedInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Right end of the last completed interval (`0` when empty).
    pub fn end(&self) -> f64 {
        self.end
    }

    /// Appends the interval `[end, end + step]`.
    pub fn push(&mut self, step: f64, coefficients: Vec<f64>) -> Result<()> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidConfig(format!("interval step must be positive, got {step}")));
        }
        if coefficients.len() != self.params.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} coefficients per interval, got {}",
                self.params.len(),
                coefficients.len()
            )));
        }
        self.intervals.push(CompletedInterval { start: self.end, step, coefficients });
        self.end += step;
        Ok(())
    }

    /// Drops every interval after the first `n`.
    pub fn truncate(&mut self, n: usize) {
        self.intervals.truncate(n);
        self.end = self.intervals.last().map_or(0.0, CompletedInterval::end);
    }
}

/// `F(t) = sum_l h_l int_0^1 K(t, t_l + v h_l) z_l(v) dv` over the completed
/// intervals, for `t >= lag.end()`.
pub fn lag_term(kernel: &Kernel, lag: &LagState, t: f64, rule: &QuadratureRule) -> Result<f64> {
    let delta = t - lag.end();
    if delta < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "lag term evaluated at t = {t} before the last completed node {}",
            lag.end()
        )));
    }
    lag_term_after(kernel, lag, delta, rule)
}

/// [`lag_term`] at `t = lag.end() + delta`, with `delta` given directly so
/// that distances to the nearest intervals carry no cancellation error.
pub fn lag_term_after(kernel: &Kernel, lag: &LagState, delta: f64, rule: &QuadratureRule) -> Result<f64> {
    if lag.is_empty() {
        return Ok(0.0);
    }
    let rule = rule.for_kernel(kernel);
    let t = lag.end() + delta;
    let mut total = 0.0;
    // Walk backwards so the gap accumulates from exact step sizes.
    let mut gap = delta;
    for interval in lag.intervals.iter().rev() {
        total += interval.step * interval_moment(kernel, &lag.params, interval, t, gap, &rule)?;
        gap += interval.step;
    }
    Ok(total)
}

fn interval_moment(
    kernel: &Kernel,
    params: &CollocationParams,
    interval: &CompletedInterval,
    t: f64,
    gap: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let h = interval.step;
    let z = &interval.coefficients;
    if let Some(m) = kernel.analytic_moments() {
        return Ok((0..params.len())
            .map(|j| {
                z[j] * m.moment(&MomentQuery {
                    t,
                    start: interval.start,
                    offset: gap + h,
                    step: h,
                    upper: 1.0,
                    params,
                    j,
                })
            })
            .sum());
    }
    // w = 1 - v, so t - s = gap + w h
    match kernel.form() {
        KernelForm::Convolution(k) => rule.integrate_from_singular_end(1.0, gap / h, |w| {
            k(gap + w * h) * params.interpolate(z, 1.0 - w)
        }),
        KernelForm::General => rule.integrate_from_singular_end(1.0, gap / h, |w| {
            kernel.evaluate(t, interval.start + (1.0 - w) * h) * params.interpolate(z, 1.0 - w)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(value: f64) -> LagState {
        let mut lag = LagState::new(CollocationParams::new(&[0.5]).unwrap());
        lag.push(1.0, vec![value]).unwrap();
        lag
    }

    fn midpoint(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let d = (b - a) / n as f64;
        (0..n).map(|k| f(a + (k as f64 + 0.5) * d)).sum::<f64>() * d
    }

    #[test]
    fn empty_state_gives_zero() {
        let lag = LagState::new(CollocationParams::new(&[0.0, 2.0 / 3.0]).unwrap());
        for t in [0.0, 0.3, 7.0] {
            assert_eq!(lag_term(&Kernel::abel_half(), &lag, t, &QuadratureRule::default()).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_kernel_constant_solution() {
        let f = lag_term(&Kernel::one(), &single(2.0), 1.5, &QuadratureRule::default()).unwrap();
        assert!((f - 2.0).abs() < 1e-15);
        assert!((midpoint(100_000, 0.0, 1.0, |_| 2.0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn linear_kernel_constant_solution() {
        let rule = QuadratureRule::default();
        let f = lag_term(&Kernel::linear_convolution(), &single(2.0), 2.0, &rule).unwrap();
        assert!((f - 3.0).abs() < 1e-14);
        assert!((midpoint(100_000, 0.0, 1.0, |s| (2.0 - s) * 2.0) - 3.0).abs() < 1e-9);
        let numeric = Kernel::convolution("u", |u| u);
        assert!((lag_term(&numeric, &single(2.0), 2.0, &rule).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn evaluation_before_end_is_rejected() {
        assert!(lag_term(&Kernel::one(), &single(1.0), 0.5, &QuadratureRule::default()).is_err());
    }

    #[test]
    fn coefficient_count_checked() {
        let mut lag = LagState::new(CollocationParams::new(&[0.0, 0.5]).unwrap());
        assert!(lag.push(0.1, vec![1.0]).is_err());
        assert!(lag.push(-0.1, vec![1.0, 2.0]).is_err());
        lag.push(0.1, vec![1.0, 2.0]).unwrap();
        lag.push(0.2, vec![2.0, 3.0]).unwrap();
        lag.truncate(1);
        assert_eq!(lag.len(), 1);
        assert!((lag.end() - 0.1).abs() < 1e-16);
    }

    #[test]
    fn abel_lag_touching_the_singularity() {
        // z = 1 on [0, 1], t = 1: int_0^1 (pi (1 - s))^(-1/2) ds = 2 / sqrt(pi)
        let f = lag_term(&Kernel::abel_half(), &single(1.0), 1.0, &QuadratureRule::default()).unwrap();
        let exact = 2.0 / std::f64::consts::PI.sqrt();
        assert!((f - exact).abs() < 1e-10, "{f} vs {exact}");
    }
}
