//! Numeric pre-screens for blow-up: growth of `G` and the integral condition.
//!
//! Every verdict here is read off finite samples. `Supports` means the samples
//! follow the asymptotic statement, `Contradicts` that they follow its
//! negation, and `Inconclusive` that they do neither convincingly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::QuadratureRule;

/// A ratio at or beyond this magnitude counts as unbounded.
pub const UNBOUNDED_THRESHOLD: f64 = 1e6;
/// A ratio at or below this magnitude counts as vanishing.
pub const VANISHING_THRESHOLD: f64 = 1e-6;
/// Increments of a convergent integral shrink at least this fast per decade.
pub const DECAY_RATIO: f64 = 0.9;
/// Number of consecutive decades the decay must persist.
pub const DECAY_DECADES: usize = 5;
// Relative slack for monotonicity comparisons between samples.
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Supports,
    Contradicts,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub verdict: Verdict,
    /// `(y, ratio)` in the order the limit is approached.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `G(y)/y` unbounded as `y -> 0+`.
    pub g_over_y_unbounded_near_zero: Trend,
    /// `G(y)/y` unbounded as `y -> infinity`.
    pub g_over_y_unbounded_away_from_zero: Trend,
    /// `y/G(y)` bounded as `y -> infinity`.
    pub y_over_g_bounded_away_from_zero: Trend,
    pub near_grid: Vec<f64>,
    pub far_grid: Vec<f64>,
    /// Set when the far grid was cut where `G` stopped being finite.
    pub far_grid_truncated_at: Option<f64>,
}

impl GrowthReport {
    /// Nonzero solutions exist near zero for fine meshes.
    pub fn existence_near_zero(&self) -> bool {
        self.g_over_y_unbounded_near_zero.verdict == Verdict::Supports
    }

    /// Both necessary conditions for blow-up hold on the samples.
    pub fn blow_up_possible(&self) -> bool {
        self.g_over_y_unbounded_away_from_zero.verdict == Verdict::Supports
            && self.y_over_g_bounded_away_from_zero.verdict == Verdict::Supports
    }

    /// `y/G(y)` grows without bound, so solutions exist for every mesh.
    pub fn unconditional_existence(&self) -> bool {
        self.y_over_g_bounded_away_from_zero.verdict == Verdict::Contradicts
    }
}

/// `10^-1, ..., 10^-12`.
pub fn default_near_grid() -> Vec<f64> {
    (1..=12).map(|k| 10f64.powi(-k)).collect()
}

/// `10^1, ..., 10^12`.
pub fn default_far_grid() -> Vec<f64> {
    (1..=12).map(|k| 10f64.powi(k)).collect()
}

/// Non-decreasing along the samples, within slack.
fn rising(r: &[f64]) -> bool {
    r.windows(2).all(|w| w[1] >= w[0] * (1.0 - SLACK))
}

fn falling(r: &[f64]) -> bool {
    r.windows(2).all(|w| w[1] <= w[0] * (1.0 + SLACK))
}

fn unbounded_trend(samples: Vec<(f64, f64)>) -> Trend {
    let r: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let last = *r.last().unwrap_or(&f64::NAN);
    let verdict = if rising(&r) && last >= UNBOUNDED_THRESHOLD * (1.0 - SLACK) {
        Verdict::Supports
    } else if falling(&r) || last <= VANISHING_THRESHOLD {
        Verdict::Contradicts
    } else {
        Verdict::Inconclusive
    };
    Trend { verdict, samples }
}

fn bounded_trend(samples: Vec<(f64, f64)>) -> Trend {
    let r: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let last = *r.last().unwrap_or(&f64::NAN);
    let verdict = if falling(&r) {
        Verdict::Supports
    } else if rising(&r) && last >= UNBOUNDED_THRESHOLD * (1.0 - SLACK) {
        Verdict::Contradicts
    } else {
        Verdict::Inconclusive
    };
    Trend { verdict, samples }
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.len() < 2 || grid.iter().any(|&y| !(y > 0.0 && y.is_finite())) {
        return Err(Error::InvalidConfig(format!("{name} grid needs at least two positive points")));
    }
    Ok(())
}

/// Trends of `G(y)/y` and `y/G(y)` toward zero and infinity.
pub fn classify_growth(g: &Nonlinearity, near: &[f64], far: &[f64]) -> Result<GrowthReport> {
    check_grid(near, "near")?;
    check_grid(far, "far")?;
    let mut near = near.to_vec();
    near.sort_by(|a, b| b.total_cmp(a));
    let mut far = far.to_vec();
    far.sort_by(f64::total_cmp);

    let mut near_samples = Vec::with_capacity(near.len());
    for &y in &near {
        let v = g.evaluate(y);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "nonlinearity", point: y });
        }
        near_samples.push((y, v / y));
    }

    let mut truncated = None;
    let mut far_used = Vec::with_capacity(far.len());
    let mut g_far = Vec::with_capacity(far.len());
    for &y in &far {
        let v = g.evaluate(y);
        if v.is_nan() {
            return Err(Error::NonFinite { what: "nonlinearity", point: y });
        }
        if v.is_infinite() {
            truncated = Some(y);
            break;
        }
        far_used.push(y);
        g_far.push(v);
    }
    if far_used.len() < 2 {
        return Err(Error::InvalidConfig("nonlinearity overflows on almost all of the far grid".into()));
    }
    let up: Vec<(f64, f64)> = far_used.iter().zip(&g_far).map(|(&y, &v)| (y, v / y)).collect();
    let down: Vec<(f64, f64)> = far_used.iter().zip(&g_far).map(|(&y, &v)| (y, y / v)).collect();

    Ok(GrowthReport {
        g_over_y_unbounded_near_zero: unbounded_trend(near_samples),
        g_over_y_unbounded_away_from_zero: unbounded_trend(up),
        y_over_g_bounded_away_from_zero: bounded_trend(down),
        near_grid: near,
        far_grid: far_used,
        far_grid_truncated_at: truncated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralVerdict {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralConditionReport {
    pub alpha: f64,
    pub delta: f64,
    pub upper_limits: Vec<f64>,
    /// `int_delta^U (s/G(s))^(1/alpha) ds/s` for each upper limit `U`.
    pub partial_integrals: Vec<f64>,
    pub verdict: IntegralVerdict,
}

const COARSE_PANELS: usize = 64;

/// Number of decades examined by [`integral_condition`].
pub const DEFAULT_DECADES: i32 = 15;

/// Partial integrals of `(s/G(s))^(1/alpha) / s` from `delta` up to
/// `10^k` for each `k` with `10^k > delta`, up to `10^15`.
pub fn integral_condition(g: &Nonlinearity, alpha: f64, delta: f64) -> Result<IntegralConditionReport> {
    if !(alpha > 0.0 && alpha.is_finite() && delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha and delta must be positive, got {alpha} and {delta}")));
    }
    let uppers: Vec<f64> = (0..=DEFAULT_DECADES).map(|k| 10f64.powi(k)).filter(|&u| u > delta).collect();
    if uppers.len() < DECAY_DECADES + 2 {
        return Err(Error::InvalidConfig(format!("delta = {delta} leaves too few decades below 1e{DEFAULT_DECADES}")));
    }
    let base = QuadratureRule::default();
    // s = e^x, so ds/s = dx
    let integrand = |x: f64| {
        let s = x.exp();
        let v = g.evaluate(s);
        if v.is_infinite() {
            0.0
        } else {
            (s / v).powf(1.0 / alpha)
        }
    };
    let mut lower = delta;
    let mut partial = 0.0;
    let mut increments = Vec::with_capacity(uppers.len());
    let mut partials = Vec::with_capacity(uppers.len());
    for &u in &uppers {
        let (a, b) = (lower.ln(), u.ln());
        let coarse: f64 = (0..COARSE_PANELS)
            .map(|k| {
                let w = (b - a) / COARSE_PANELS as f64;
                base.panel(a + k as f64 * w, a + (k + 1) as f64 * w, integrand)
            })
            .sum();
        let rule = base.clone().with_tolerances((1e-13 * coarse.abs()).max(f64::MIN_POSITIVE), 1e-12)?;
        let inc = rule.integrate(a, b, integrand)?;
        if !inc.is_finite() || inc < 0.0 {
            return Err(Error::NonFinite { what: "integral condition integrand", point: u });
        }
        partial += inc;
        increments.push(inc);
        partials.push(partial);
        lower = u;
    }

    // The first increment covers a partial decade; judge the full ones.
    let tail = &increments[increments.len() - (DECAY_DECADES + 1)..];
    let ratios: Vec<f64> = tail
        .windows(2)
        .map(|w| if w[0] == 0.0 { if w[1] == 0.0 { 0.0 } else { f64::INFINITY } } else { w[1] / w[0] })
        .collect();
    let verdict = if ratios.iter().all(|&r| r < DECAY_RATIO) {
        IntegralVerdict::Converges
    } else if ratios.iter().all(|&r| r >= 1.0 - SLACK) {
        IntegralVerdict::Diverges
    } else {
        IntegralVerdict::Inconclusive
    };
    Ok(IntegralConditionReport { alpha, delta, upper_limits: uppers, partial_integrals: partials, verdict })
}
