//! Nonlinearities `G(y)` acting on non-negative arguments.

use std::fmt;
use std::sync::Arc;

type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type FixedPointFn = Arc<dyn Fn(f64, f64) -> Option<f64> + Send + Sync>;

#[derive(Clone)]
pub struct Nonlinearity {
    label: String,
    eval: Fn1,
    analytic_fixed_point: Option<FixedPointFn>,
}

impl Nonlinearity {
    pub fn new<F>(label: impl Into<String>, g: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), eval: Arc::new(g), analytic_fixed_point: None }
    }

    /// Attaches a closed-form solver for the nondivergent fixed point of
    /// `y -> G(alpha + beta*y)`; it returns `None` when no such point exists.
    pub fn with_fixed_point<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, f64) -> Option<f64> + Send + Sync + 'static,
    {
        self.analytic_fixed_point = Some(Arc::new(f));
        self
    }

    /// `sqrt(y)` on `[0, 1]` and `y^2` beyond, with its analytic fixed points.
    pub fn example1() -> Self {
        Self::new("example1", |y: f64| if y <= 1.0 { y.sqrt() } else { y * y })
            .with_fixed_point(crate::solver::example1_fixed_point)
    }

    /// `sqrt(y)` on `[0, 1]` and `exp(y - 1)` beyond.
    pub fn example2() -> Self {
        Self::new("example2", |y: f64| if y <= 1.0 { y.sqrt() } else { (y - 1.0).exp() })
    }

    /// `y^a` for all `y >= 0`.
    pub fn power(a: f64) -> Self {
        Self::new(format!("power({a})"), move |y: f64| y.powf(a))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, y: f64) -> f64 {
        (self.eval)(y)
    }

    pub fn analytic_fixed_point(&self, alpha: f64, beta: f64) -> Option<Option<f64>> {
        self.analytic_fixed_point.as_ref().map(|f| f(alpha, beta))
    }

    pub fn has_analytic_fixed_point(&self) -> bool {
        self.analytic_fixed_point.is_some()
    }
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("label", &self.label)
            .field("analytic_fixed_point", &self.analytic_fixed_point.is_some())
            .finish()
    }
}
