//! Coefficient integrals `B_n(i, j)` and lag terms `F_n(t)`.
//!
//! Smooth integrands use adaptive Gauss–Legendre bisection. Kernels flagged as
//! weakly singular on the diagonal get a geometrically graded mesh (ratio 1/4)
//! toward the singular end before the adaptive rule is applied per panel.
//!
//! Integrals are written in a local distance variable `w >= 0` measured back
//! from the right end of the integration range, so that `t - s` is formed as
//! `gap + w*h` rather than as a difference of two large, nearly equal times.

mod gauss;
mod lag;

pub use gauss::GaussLegendre;
pub use lag::{lag_term, lag_term_after, CompletedInterval, LagState};

use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelForm, MomentQuery};
use crate::lagrange::CollocationParams;

/// Panels used toward a singular endpoint.
pub const MAX_GRADING_LEVELS: usize = 40;
const GRADING_RATIO: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularityMode {
    None,
    /// Graded subdivision toward an `u^(-gamma)` endpoint.
    EndpointSplit(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    gauss: GaussLegendre,
    pub max_depth: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub singularity: SingularityMode,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(16).expect("16 nodes is a valid rule")
    }
}

impl QuadratureRule {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidConfig(format!(
                "quadrature needs at least 2 nodes per panel, got {nodes}"
            )));
        }
        Ok(Self {
            gauss: GaussLegendre::new(nodes),
            max_depth: 30,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            singularity: SingularityMode::None,
        })
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be positive".into()));
        }
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        Ok(self)
    }

    pub fn with_singularity(mut self, mode: SingularityMode) -> Self {
        self.singularity = mode;
        self
    }

    /// The rule specialised to a kernel's singularity annotation.
    pub fn for_kernel(&self, kernel: &Kernel) -> Self {
        let mut rule = self.clone();
        rule.singularity = match kernel.singularity_exponent() {
            Some(g) if g > 0.0 => SingularityMode::EndpointSplit(g),
            _ => SingularityMode::None,
        };
        rule
    }

    pub fn nodes(&self) -> usize {
        self.gauss.len()
    }

    /// One fixed application of the Gauss rule on `[a, b]`.
    pub fn panel<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.gauss.integrate(a, b, f)
    }

    /// Adaptive bisection on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let whole = self.gauss.integrate(a, b, &f);
        self.refine(&f, a, b, whole, 0)
    }

    fn refine<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, whole: f64, depth: usize) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let left = self.gauss.integrate(a, mid, f);
        let right = self.gauss.integrate(mid, b, f);
        let both = left + right;
        if !both.is_finite() {
            return Err(Error::NonFinite { what: "quadrature integrand", point: mid });
        }
        let diff = (both - whole).abs();
        if diff <= self.abs_tol.max(self.rel_tol * both.abs()) {
            return Ok(both);
        }
        if depth >= self.max_depth {
            return Err(Error::QuadratureFailure { a, b, estimate: diff });
        }
        Ok(self.refine(f, a, mid, left, depth + 1)? + self.refine(f, mid, b, right, depth + 1)?)
    }

    /// `int_0^length g(w) dw` where `g` may be singular at `w = -gap`
    /// (`gap >= 0`, in the same units as `w`).
    ///
    /// With [`SingularityMode::None`] this is plain adaptive quadrature. With
    /// endpoint splitting the panels `[L r^(k+1), L r^k]` are integrated one by
    /// one until they are narrower than `gap`; when `gap = 0` the innermost
    /// panel below `L r^40` gets a single Gauss application.
    pub fn integrate_from_singular_end<F: Fn(f64) -> f64>(
        &self,
        length: f64,
        gap: f64,
        g: F,
    ) -> Result<f64> {
        if length <= 0.0 {
            return Ok(0.0);
        }
        let SingularityMode::EndpointSplit(_) = self.singularity else {
            return self.integrate(0.0, length, g);
        };
        let mut total = 0.0;
        let mut hi = length;
        for _ in 0..MAX_GRADING_LEVELS {
            if gap > 0.0 && hi <= gap {
                break;
            }
            let lo = hi * GRADING_RATIO;
            total += self.integrate(lo, hi, &g)?;
            hi = lo;
        }
        total += if gap > 0.0 { self.integrate(0.0, hi, &g)? } else { self.panel(0.0, hi, &g) };
        Ok(total)
    }
}

/// `B_n(i, j) = int_0^{c_i} K(t_n + c_i h_n, t_n + s h_n) L_j(s) ds`.
pub fn coefficient_integral(
    kernel: &Kernel,
    t_n: f64,
    h_n: f64,
    params: &CollocationParams,
    i: usize,
    j: usize,
    rule: &QuadratureRule,
) -> Result<f64> {
    partial_coefficient_integral(kernel, t_n, h_n, params, params.nodes()[i], j, rule)
}

/// `int_0^upper K(t_n + upper h_n, t_n + s h_n) L_j(s) ds` for any
/// `upper` in `[0, 1]`; [`coefficient_integral`] is the case `upper = c_i`.
pub fn partial_coefficient_integral(
    kernel: &Kernel,
    t_n: f64,
    h_n: f64,
    params: &CollocationParams,
    upper: f64,
    j: usize,
    rule: &QuadratureRule,
) -> Result<f64> {
    if upper <= 0.0 {
        return Ok(0.0);
    }
    if let Some(m) = kernel.analytic_moments() {
        return Ok(m.moment(&MomentQuery {
            t: t_n + upper * h_n,
            start: t_n,
            offset: upper * h_n,
            step: h_n,
            upper,
            params,
            j,
        }));
    }
    let rule = rule.for_kernel(kernel);
    // w = upper - s, so t - s_abs = w h_n
    match kernel.form() {
        KernelForm::Convolution(k) => {
            rule.integrate_from_singular_end(upper, 0.0, |w| k(w * h_n) * params.basis(j, upper - w))
        }
        KernelForm::General => {
            let t = t_n + upper * h_n;
            rule.integrate_from_singular_end(upper, 0.0, |w| {
                kernel.evaluate(t, t_n + (upper - w) * h_n) * params.basis(j, upper - w)
            })
        }
    }
}
