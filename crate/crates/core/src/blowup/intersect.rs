use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Curve;

/// A sign change of `d(c) = t_a(c) - t_b(c)` between two grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub c: f64,
    pub t: f64,
    /// Largest change of the slope of `d` between the bracketing grid
    /// segment and its neighbours. Jumps in either curve show up as large kinks.
    pub kink: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub c: f64,
    pub t: f64,
    /// Every crossing found, ascending in `c`.
    pub crossings: Vec<Crossing>,
}

/// Where the curves for two stepsizes cross.
///
/// Grid points missing a blow-up estimate in either curve are dropped. Each
/// sign change of `d` is located by linear interpolation of `d`, and `t` is
/// read off curve `a` there. When there are several crossings the one where
/// `d` is smoothest (smallest slope discontinuity) is returned, so sign
/// changes caused by a jump in one curve are passed over.
pub fn intersect_curves(a: &Curve, b: &Curve) -> Result<Intersection> {
    if a.c != b.c {
        return Err(Error::InvalidConfig("curves must share the same parameter grid".into()));
    }
    let pts: Vec<(f64, f64, f64)> = a
        .c
        .iter()
        .zip(a.t.iter().zip(&b.t))
        .filter_map(|(&c, (ta, tb))| Some((c, (*ta)?, (*tb)?)))
        .collect();
    if pts.is_empty() {
        return Err(Error::InvalidConfig("no grid point has estimates on both curves".into()));
    }
    let d: Vec<f64> = pts.iter().map(|&(_, ta, tb)| ta - tb).collect();
    if d.iter().all(|&x| x == 0.0) {
        return Err(Error::CurvesCoincide);
    }

    let slopes: Vec<f64> = (0..pts.len().saturating_sub(1))
        .map(|k| (d[k + 1] - d[k]) / (pts[k + 1].0 - pts[k].0))
        .collect();
    // slope change between segments k - 1 and k
    let turn = |k: usize| -> f64 {
        if k == 0 || k >= slopes.len() {
            0.0
        } else {
            (slopes[k] - slopes[k - 1]).abs()
        }
    };

    let mut crossings = Vec::new();
    for k in 0..pts.len() {
        let (ck, tk, _) = pts[k];
        if d[k] == 0.0 {
            crossings.push(Crossing { c: ck, t: tk, kink: turn(k) });
            continue;
        }
        if k + 1 < pts.len() && d[k] * d[k + 1] < 0.0 {
            let (c1, t1, _) = pts[k + 1];
            let frac = d[k] / (d[k] - d[k + 1]);
            crossings.push(Crossing {
                c: ck + frac * (c1 - ck),
                t: tk + frac * (t1 - tk),
                kink: turn(k).max(turn(k + 1)),
            });
        }
    }

    let Some(best) = crossings.iter().copied().min_by(|x, y| x.kink.total_cmp(&y.kink)) else {
        let (k, gap) = d
            .iter()
            .map(|x| x.abs())
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        return Err(Error::NoIntersection { min_gap: gap, at: pts[k].0 });
    };
    Ok(Intersection { c: best.c, t: best.t, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(h: f64, c: &[f64], t: &[f64]) -> Curve {
        Curve { h, c: c.to_vec(), t: t.iter().map(|&x| Some(x)).collect() }
    }

    #[test]
    fn straight_lines_cross_exactly() {
        let c = [0.0, 0.25, 0.5, 0.75, 1.0];
        let a = curve(0.1, &c, &c.map(|x| 3.0 - x));
        let b = curve(0.05, &c, &c.map(|x| 2.8 - 0.5 * x));
        // 3 - x = 2.8 - 0.5 x at x = 0.4
        let i = intersect_curves(&a, &b).unwrap();
        assert!((i.c - 0.4).abs() < 1e-12);
        assert!((i.t - 2.6).abs() < 1e-12);
        assert_eq!(i.crossings.len(), 1);
    }

    #[test]
    fn identical_curves_coincide() {
        let a = curve(0.1, &[0.1, 0.2], &[3.0, 2.9]);
        assert_eq!(intersect_curves(&a, &a.clone()), Err(Error::CurvesCoincide));
    }

    #[test]
    fn parallel_curves_report_closest_gap() {
        let a = curve(0.1, &[0.1, 0.2, 0.3], &[3.0, 2.9, 2.8]);
        let b = curve(0.05, &[0.1, 0.2, 0.3], &[3.1, 2.95, 2.9]);
        match intersect_curves(&a, &b) {
            Err(Error::NoIntersection { min_gap, at }) => {
                assert!((min_gap - 0.05).abs() < 1e-12);
                assert_eq!(at, 0.2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn crossing_at_a_jump_is_passed_over() {
        let c: Vec<f64> = (0..8).map(|k| 0.1 * k as f64).collect();
        // a jumps down between 0.1 and 0.2, then crosses b smoothly near 0.55
        let a = curve(0.1, &c, &[3.2, 3.2, 3.05, 3.04, 3.03, 3.02, 3.01, 3.0]);
        let b = curve(0.05, &c, &[3.1, 3.1, 3.1, 3.045, 3.035, 3.015, 3.0, 2.98]);
        let i = intersect_curves(&a, &b).unwrap();
        assert_eq!(i.crossings.len(), 2);
        assert!(i.c > 0.4, "{i:?}");
    }

    #[test]
    fn missing_points_dropped_pairwise() {
        let a = Curve { h: 0.1, c: vec![0.1, 0.2, 0.3], t: vec![Some(3.0), None, Some(2.0)] };
        let b = curve(0.05, &[0.1, 0.2, 0.3], &[2.5, 2.5, 2.5]);
        let i = intersect_curves(&a, &b).unwrap();
        assert!((i.c - 0.2).abs() < 1e-12);
    }
}
