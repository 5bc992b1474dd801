//! Kernels `K(t, s)` supported on `0 <= s <= t`.

use std::fmt;
use std::sync::Arc;

use crate::lagrange::CollocationParams;

type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One weighted kernel moment
/// `int_0^upper K(t, start + v*step) L_j(v) dv`.
///
/// Both the coefficient integrals `B_n(i, j)` (with `t = t_{n,i}` and
/// `upper = c_i`) and the per-interval lag contributions (with `upper = 1`)
/// are moments of this form. `offset` is `t - start`, supplied by the caller
/// from local coordinates so it does not suffer cancellation for large `t`.
#[derive(Debug, Clone, Copy)]
pub struct MomentQuery<'a> {
    pub t: f64,
    pub start: f64,
    pub offset: f64,
    pub step: f64,
    pub upper: f64,
    pub params: &'a CollocationParams,
    pub j: usize,
}

/// Closed-form kernel moments, used instead of quadrature when available.
pub trait AnalyticMoments: Send + Sync {
    fn moment(&self, q: &MomentQuery<'_>) -> f64;
}

/// Moments of the affine convolution kernel `k(u) = a + b*u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMoments {
    pub constant: f64,
    pub slope: f64,
}

impl AnalyticMoments for AffineMoments {
    fn moment(&self, q: &MomentQuery<'_>) -> f64 {
        // K = (a + b (t - start)) - b step v
        let offset = q.offset;
        let p0 = q.params.basis_moment(q.j, 0, q.upper);
        if self.slope == 0.0 {
            return self.constant * p0;
        }
        let p1 = q.params.basis_moment(q.j, 1, q.upper);
        (self.constant + self.slope * offset) * p0 - self.slope * q.step * p1
    }
}

#[derive(Clone)]
pub enum KernelForm {
    General,
    /// `K(t, s) = k(t - s)`.
    Convolution(Fn1),
}

/// A kernel together with the metadata the quadrature needs.
#[derive(Clone)]
pub struct Kernel {
    label: String,
    eval: Fn2,
    form: KernelForm,
    singularity_exponent: Option<f64>,
    moments: Option<Arc<dyn AnalyticMoments>>,
}

impl Kernel {
    pub fn general<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            eval: Arc::new(f),
            form: KernelForm::General,
            singularity_exponent: None,
            moments: None,
        }
    }

    pub fn convolution<F>(label: impl Into<String>, k: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let k: Fn1 = Arc::new(k);
        let inner = k.clone();
        Self {
            label: label.into(),
            eval: Arc::new(move |t, s| inner(t - s)),
            form: KernelForm::Convolution(k),
            singularity_exponent: None,
            moments: None,
        }
    }

    /// `K(t, s) = 1`, with closed-form moments.
    pub fn one() -> Self {
        Self::convolution("one", |_| 1.0).with_moments(AffineMoments { constant: 1.0, slope: 0.0 })
    }

    /// `K(t, s) = t - s`, with closed-form moments.
    pub fn linear_convolution() -> Self {
        Self::convolution("linear_convolution", |u| u)
            .with_moments(AffineMoments { constant: 0.0, slope: 1.0 })
    }

    /// `K(t, s) = (pi (t - s))^(-1/2)`, weakly singular on the diagonal.
    pub fn abel_half() -> Self {
        Self::convolution("abel(1/2)", |u| (std::f64::consts::PI * u).powf(-0.5))
            .with_singularity(0.5)
    }

    /// `K(t, s) = (t - s)^p` for `p > -1`; singular on the diagonal when `p < 0`.
    pub fn power(p: f64) -> Self {
        let k = Self::convolution(format!("power({p})"), move |u| u.powf(p));
        if p < 0.0 {
            k.with_singularity(-p)
        } else {
            k
        }
    }

    /// Marks `k(u) ~ u^(-gamma)` as `u -> 0+`.
    pub fn with_singularity(mut self, gamma: f64) -> Self {
        self.singularity_exponent = if gamma > 0.0 { Some(gamma) } else { None };
        self
    }

    pub fn with_moments(mut self, moments: impl AnalyticMoments + 'static) -> Self {
        self.moments = Some(Arc::new(moments));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `K(t, s)`, zero outside the support `0 <= s <= t`.
    pub fn evaluate(&self, t: f64, s: f64) -> f64 {
        if s < 0.0 || s > t {
            return 0.0;
        }
        (self.eval)(t, s)
    }

    pub fn form(&self) -> &KernelForm {
        &self.form
    }

    pub fn is_convolution(&self) -> bool {
        matches!(self.form, KernelForm::Convolution(_))
    }

    pub fn singularity_exponent(&self) -> Option<f64> {
        self.singularity_exponent
    }

    pub fn analytic_moments(&self) -> Option<&dyn AnalyticMoments> {
        self.moments.as_deref()
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("label", &self.label)
            .field("convolution", &self.is_convolution())
            .field("singularity_exponent", &self.singularity_exponent)
            .field("analytic_moments", &self.moments.is_some())
            .finish()
    }
}
