use volterra_blowup::solver::FixedMeshOutcome;
use volterra_blowup::solver::solve_steps;
use volterra_blowup::*;

fn report(e: Example, case: CollocationCase, h: f64) -> (BlowUpReport, CollocationSolution) {
    let cfg = CollocationConfig::new(case, h);
    estimate_blowup_with(&e.problem(), &cfg, &QuadratureRule::default()).unwrap()
}

#[test]
fn blow_up_report_invariants() {
    for e in Example::ALL {
        for case in [CollocationCase::Case1 { c1: 0.5 }, CollocationCase::radau_one()] {
            let (r, _) = report(e, case, 0.05);
            let t = r.estimate().expect("blow-up");
            let sum: f64 = r.accepted_steps().iter().sum();
            assert!((t - sum).abs() <= 1e-12 * t, "estimate is the sum of accepted steps");
            assert!(r.final_stepsize < 1e-12);
            assert!(r.steps.windows(2).all(|w| w[1].start > w[0].start));
        }
    }
}

#[test]
fn replaying_accepted_steps_reproduces_coefficients() {
    for e in [Example::One, Example::Three, Example::Four] {
        let case = CollocationCase::Case2 { c2: 0.5 };
        let (r, sol) = report(e, case, 0.05);
        let cfg = CollocationConfig::new(case, 0.05);
        let FixedMeshOutcome::Solved(replay) = solve_steps(&e.problem(), &cfg, &r.accepted_steps()).unwrap() else {
            panic!("replay hit a missing fixed point");
        };
        assert_eq!(replay.len(), sol.len());
        for n in 0..sol.len() {
            for (a, b) in sol.coefficients(n).iter().zip(replay.coefficients(n)) {
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "example {} interval {n}", e.number());
            }
        }
    }
}

#[test]
fn uniform_mesh_before_blow_up_is_solved() {
    let mesh: Vec<f64> = (0..=25).map(|k| 0.1 * k as f64).collect();
    let cfg = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, 0.1);
    let out = solve_fixed_mesh(&Example::One.problem(), &cfg, &mesh).unwrap();
    assert!(matches!(out, FixedMeshOutcome::Solved(ref s) if s.len() == 25));
}

#[test]
fn sublinear_nonlinearity_is_solved_on_long_mesh() {
    let p = Problem::new("sqrt", Kernel::one(), Nonlinearity::power(0.5));
    let mesh: Vec<f64> = (0..=100).map(|k| 0.1 * k as f64).collect();
    for case in [CollocationCase::Case1 { c1: 0.5 }, CollocationCase::radau_one()] {
        let cfg = CollocationConfig::new(case, 0.1);
        assert!(matches!(solve_fixed_mesh(&p, &cfg, &mesh).unwrap(), FixedMeshOutcome::Solved(_)));
    }
}

#[test]
fn solutions_satisfy_collocation_equations() {
    let rule = QuadratureRule::default();
    for e in Example::ALL {
        for case in [CollocationCase::Case1 { c1: 0.3 }, CollocationCase::Case2 { c2: 0.7 }] {
            let (_, sol) = report(e, case, 0.1);
            let res = sol.residuals(&e.problem(), &rule).unwrap();
            for (n, r) in res.iter().enumerate() {
                let scale = sol.coefficients(n).iter().fold(1.0f64, |m, z| m.max(z.abs()));
                assert!(*r <= 1e-9 * scale, "example {} interval {n}: {r}", e.number());
            }
        }
    }
}

#[test]
fn catalog_coefficients_are_non_negative() {
    for e in Example::ALL {
        for case in [CollocationCase::Case1 { c1: 0.5 }, CollocationCase::Case2 { c2: 0.5 }, CollocationCase::radau_one()] {
            let (_, sol) = report(e, case, 0.1);
            for n in 0..sol.len() {
                assert!(sol.coefficients(n).iter().all(|&z| z >= 0.0), "example {} interval {n}", e.number());
            }
        }
    }
}

#[test]
fn radau_refinement_approaches_exact_time() {
    let errs: Vec<f64> = [0.1, 0.05, 0.01, 0.005]
        .iter()
        .map(|&h| (report(Example::One, CollocationCase::radau_one(), h).0.estimate().unwrap() - 3.0).abs())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn sweeps_are_deterministic() {
    let grid = parameter_grid(0.05, 1.0, 0.05).unwrap();
    let base = CollocationConfig::new(CollocationCase::Case2 { c2: 0.5 }, 0.05);
    let run = || sweep_parameter(&Example::Three.problem(), CaseKind::Case2, &grid, &[0.05, 0.025], &base).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.rows.len(), b.rows.len());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.c.to_bits(), y.c.to_bits());
        assert_eq!(x.h.to_bits(), y.h.to_bits());
        assert_eq!(x.estimate.map(f64::to_bits), y.estimate.map(f64::to_bits));
    }
}

#[test]
fn case1_estimate_non_increasing_in_c1() {
    let grid = parameter_grid(0.01, 1.0, 0.01).unwrap();
    let hs = [0.1, 0.05, 0.01, 0.005];
    let mut rises = Vec::new();
    for e in [Example::One, Example::Two, Example::Three] {
        let base = CollocationConfig::new(CollocationCase::Case1 { c1: 0.5 }, hs[0]);
        let rec = sweep_parameter(&e.problem(), CaseKind::Case1, &grid, &hs, &base).unwrap();
        for h in hs {
            let curve = rec.curve(h).unwrap();
            for (k, w) in curve.t.windows(2).enumerate() {
                if let (Some(a), Some(b)) = (w[0], w[1]) {
                    if b > a {
                        rises.push(format!("example {} h={h} c1={}: {a:.6} -> {b:.6}", e.number(), curve.c[k + 1]));
                    }
                }
            }
        }
    }
    assert!(rises.is_empty(), "{} rises, first: {:?}", rises.len(), &rises[..rises.len().min(5)]);
}
