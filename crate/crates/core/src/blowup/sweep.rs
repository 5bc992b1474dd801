use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Problem;
use crate::config::{CaseKind, CollocationConfig};
use crate::error::{Error, Result};

use super::{estimate_blowup, BlowUpStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    BlowUp,
    ReachedHorizon,
    NumericFailure,
    NoNontrivialSolution,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BlowUp => "blowup",
            Self::ReachedHorizon => "horizon",
            Self::NumericFailure => "failure",
            Self::NoNontrivialSolution => "trivial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::BlowUp, Self::ReachedHorizon, Self::NumericFailure, Self::NoNontrivialSolution]
            .into_iter()
            .find(|r| r.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub h: f64,
    /// Blow-up estimate, or the time reached for `ReachedHorizon`; `None` on failure.
    pub estimate: Option<f64>,
    pub status: RowStatus,
    pub steps: usize,
    pub halvings: usize,
}

/// Extremes of the blow-up estimates over `c` for one stepsize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub h: f64,
    pub min: f64,
    pub min_c: f64,
    pub max: f64,
    pub max_c: f64,
    /// `(max - min) / reference`, or `(max - min) / max` without a reference.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub kind: CaseKind,
    pub reference: Option<f64>,
    /// Grouped by stepsize in the order given, ascending in `c` within a group.
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
}

/// Blow-up estimates along `c` for one stepsize.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub h: f64,
    pub c: Vec<f64>,
    pub t: Vec<Option<f64>>,
}

impl SweepRecord {
    pub fn stepsizes(&self) -> Vec<f64> {
        let mut hs: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !hs.contains(&r.h) {
                hs.push(r.h);
            }
        }
        hs
    }

    pub fn curve(&self, h: f64) -> Option<Curve> {
        let rows: Vec<&SweepRow> = self.rows.iter().filter(|r| r.h == h).collect();
        if rows.is_empty() {
            return None;
        }
        Some(Curve {
            h,
            c: rows.iter().map(|r| r.c).collect(),
            t: rows
                .iter()
                .map(|r| if r.status == RowStatus::BlowUp { r.estimate } else { None })
                .collect(),
        })
    }

    pub fn summary(&self, h: f64) -> Option<&SweepSummary> {
        self.summaries.iter().find(|s| s.h == h)
    }
}

/// `start, start + step, ..., end` with accumulated rounding removed.
pub fn parameter_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start <= end && start.is_finite() && end.is_finite()) {
        return Err(Error::InvalidConfig(format!("invalid grid {start}:{end}:{step}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// One [`estimate_blowup`] per `(c, h)`; rows are computed in parallel and
/// assembled in a fixed order.
pub fn sweep_parameter(
    problem: &Problem,
    kind: CaseKind,
    c_grid: &[f64],
    stepsizes: &[f64],
    base: &CollocationConfig,
) -> Result<SweepRecord> {
    if c_grid.is_empty() {
        return Err(Error::InvalidConfig("the collocation parameter grid is empty".into()));
    }
    if stepsizes.is_empty() {
        return Err(Error::InvalidConfig("at least one stepsize is required".into()));
    }
    let mut grid = c_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut configs = Vec::with_capacity(grid.len() * stepsizes.len());
    for &h in stepsizes {
        for &c in &grid {
            let mut cfg = *base;
            cfg.case = kind.with_parameter(c);
            cfg.initial_stepsize = h;
            cfg.validate()?;
            configs.push(cfg);
        }
    }

    let rows: Vec<SweepRow> = configs
        .par_iter()
        .map(|cfg| {
            let (estimate, status, steps, halvings) = match estimate_blowup(problem, cfg) {
                Ok(r) => {
                    let (estimate, status) = match &r.status {
                        BlowUpStatus::BlowUp { estimate } => (Some(*estimate), RowStatus::BlowUp),
                        BlowUpStatus::ReachedHorizon { time } => (Some(*time), RowStatus::ReachedHorizon),
                        BlowUpStatus::NumericFailure { .. } => (None, RowStatus::NumericFailure),
                        BlowUpStatus::NoNontrivialSolution => (None, RowStatus::NoNontrivialSolution),
                    };
                    (estimate, status, r.steps.len(), r.halvings)
                }
                Err(_) => (None, RowStatus::NumericFailure, 0, 0),
            };
            SweepRow { c: cfg.case.parameter(), h: cfg.initial_stepsize, estimate, status, steps, halvings }
        })
        .collect();

    let summaries = stepsizes
        .iter()
        .filter_map(|&h| summarize(h, rows.iter().filter(|r| r.h == h), problem.reference))
        .collect();
    Ok(SweepRecord { kind, reference: problem.reference, rows, summaries })
}

fn summarize<'a>(h: f64, rows: impl Iterator<Item = &'a SweepRow>, reference: Option<f64>) -> Option<SweepSummary> {
    let mut out: Option<SweepSummary> = None;
    for r in rows {
        let (RowStatus::BlowUp, Some(t)) = (r.status, r.estimate) else { continue };
        let s = out.get_or_insert(SweepSummary { h, min: t, min_c: r.c, max: t, max_c: r.c, spread: 0.0 });
        if t < s.min {
            s.min = t;
            s.min_c = r.c;
        }
        if t > s.max {
            s.max = t;
            s.max_c = r.c;
        }
    }
    out.map(|mut s| {
        s.spread = (s.max - s.min) / reference.unwrap_or(s.max);
        s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Example;
    use crate::config::CollocationCase;

    #[test]
    fn grid_is_clean() {
        let g = parameter_grid(0.01, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[38], 0.39);
        assert_eq!(g[99], 1.0);
        assert!(parameter_grid(1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn single_point_sweep_has_zero_spread() {
        let base = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let rec = sweep_parameter(&Example::One.problem(), CaseKind::Case1, &[0.5], &[0.1], &base).unwrap();
        assert_eq!(rec.rows.len(), 1);
        assert_eq!(rec.summaries[0].spread, 0.0);
    }

    #[test]
    fn empty_inputs_rejected() {
        let base = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let p = Example::One.problem();
        assert!(sweep_parameter(&p, CaseKind::Case1, &[], &[0.1], &base).is_err());
        assert!(sweep_parameter(&p, CaseKind::Case1, &[0.5], &[], &base).is_err());
        assert!(sweep_parameter(&p, CaseKind::Case1, &[0.0], &[0.1], &base).is_err());
    }

    #[test]
    fn rows_sorted_and_deterministic() {
        let base = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
        let p = Example::One.problem();
        let a = sweep_parameter(&p, CaseKind::Case1, &[0.9, 0.1, 0.5], &[0.1, 0.05], &base).unwrap();
        let b = sweep_parameter(&p, CaseKind::Case1, &[0.9, 0.1, 0.5], &[0.1, 0.05], &base).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.iter().map(|r| r.c).collect::<Vec<_>>(), vec![0.1, 0.5, 0.9, 0.1, 0.5, 0.9]);
        assert_eq!(a.stepsizes(), vec![0.1, 0.05]);
    }

    #[test]
    fn status_names_round_trip() {
        for s in [RowStatus::BlowUp, RowStatus::ReachedHorizon, RowStatus::NumericFailure, RowStatus::NoNontrivialSolution] {
            assert_eq!(RowStatus::parse(s.as_str()), Some(s));
        }
    }
}
