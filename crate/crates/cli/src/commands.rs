use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use volterra_blowup::analysis::{default_far_grid, default_near_grid};
use volterra_blowup::blowup::Crossing;
use volterra_blowup::validate::CheckStatus;
use volterra_blowup::{
    classify_growth, estimate_blowup, integral_condition, intersect_curves, parameter_grid, sweep_parameter,
    validate_general_conditions, BlowUpReport, BlowUpStatus, CaseKind, CollocationConfig, Example,
    GrowthReport, IntegralConditionReport, IntegralVerdict, RowStatus, SweepRecord, SweepRow, ValidationGrid,
    ValidationReport,
};

use crate::args::{CheckArgs, Format, OutputArgs, ProblemArgs, RunArgs, SolveArgs, SweepArgs};
use crate::error::CliError;
use crate::output::{row_line, sig9, sweep_csv, SWEEP_HEADER};
use crate::problem_file::LoadedProblem;

/// What a command produced and the exit status it asks for.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub exit: u8,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn stamp(out: &OutputArgs) -> Option<String> {
    out.stamp.then(|| {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("vblowup {} generated_unix={secs}", env!("CARGO_PKG_VERSION"))
    })
}

fn stamped_json<T: Serialize>(value: &T, out: &OutputArgs) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value)?;
    if let (Some(s), Some(obj)) = (stamp(out), v.as_object_mut()) {
        obj.insert("stamp".into(), s.into());
    }
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn load_problem(args: &ProblemArgs) -> Result<LoadedProblem, CliError> {
    let mut loaded = match (&args.example, &args.problem) {
        (Some(n), None) => LoadedProblem::example(Example::from_number(*n)?),
        (None, Some(path)) => LoadedProblem::from_path(path)?,
        _ => return Err(usage("give exactly one of --example and --problem")),
    };
    if let Some(r) = args.reference {
        if !(r > 0.0 && r.is_finite()) {
            return Err(usage(format!("--ref must be positive, got {r}")));
        }
        loaded.problem.reference = Some(r);
    }
    Ok(loaded)
}

fn case_kind(solve: &SolveArgs) -> Result<CaseKind, CliError> {
    match (solve.case, solve.c1.is_some(), solve.c2.is_some()) {
        (Some(1), _, false) | (None, true, false) => Ok(CaseKind::Case1),
        (Some(2), false, _) | (None, false, true) => Ok(CaseKind::Case2),
        (Some(1), _, true) => Err(usage("--c2 belongs to --case 2")),
        (Some(2), true, _) => Err(usage("--c1 belongs to --case 1")),
        _ => Err(usage("choose a case with --case, --c1 or --c2")),
    }
}

fn base_config(solve: &SolveArgs, kind: CaseKind, c: f64) -> CollocationConfig {
    CollocationConfig::new(kind.with_parameter(c), solve.h[0])
        .with_horizon(solve.horizon)
        .with_step_tolerance(solve.step_tol)
        .with_halving_factor(solve.halve)
}

fn check_stepsizes(h: &[f64]) -> Result<(), CliError> {
    match h.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        Some(x) => Err(usage(format!("stepsizes must be positive, got {x}"))),
        None => Ok(()),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(usage(format!("--c-grid expects start:end:step, got {text:?}")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("--c-grid: {s:?} is not a number")));
    Ok(parameter_grid(num(a)?, num(b)?, num(step)?)?)
}

fn sweep_grid(solve: &SolveArgs, kind: CaseKind, loaded: &LoadedProblem) -> Result<Vec<f64>, CliError> {
    match &solve.c_grid {
        Some(text) => parse_grid(text),
        None => {
            let start = match (kind, loaded.example) {
                (CaseKind::Case1, Some(e)) => e.default_case1_grid_start(),
                _ => 0.01,
            };
            Ok(parameter_grid(start, 1.0, 0.01)?)
        }
    }
}

fn row_from_report(c: f64, h: f64, r: &BlowUpReport) -> SweepRow {
    let (status, estimate) = match r.status {
        BlowUpStatus::BlowUp { estimate } => (RowStatus::BlowUp, Some(estimate)),
        BlowUpStatus::ReachedHorizon { time } => (RowStatus::ReachedHorizon, Some(time)),
        BlowUpStatus::NumericFailure { .. } => (RowStatus::NumericFailure, None),
        BlowUpStatus::NoNontrivialSolution => (RowStatus::NoNontrivialSolution, None),
    };
    SweepRow { c, h, estimate, status, steps: r.steps.len(), halvings: r.halvings }
}

#[derive(Serialize)]
struct RunEntry<'a> {
    c: f64,
    h: f64,
    report: &'a BlowUpReport,
}

#[derive(Serialize)]
struct RunJson<'a> {
    problem: &'a str,
    case: CaseKind,
    runs: Vec<RunEntry<'a>>,
}

pub fn run(args: &RunArgs) -> Result<Outcome, CliError> {
    let loaded = load_problem(&args.problem)?;
    let solve = &args.solve;
    if solve.c_grid.is_some() {
        return Err(usage("run takes a single --c1 or --c2; use sweep for a grid"));
    }
    let kind = case_kind(solve)?;
    let c = solve.c1.or(solve.c2).ok_or_else(|| usage("run needs --c1 or --c2"))?;
    check_stepsizes(&solve.h)?;
    let base = base_config(solve, kind, c);
    let mut reports = Vec::with_capacity(solve.h.len());
    for &h in &solve.h {
        let mut cfg = base;
        cfg.initial_stepsize = h;
        reports.push((h, estimate_blowup(&loaded.problem, &cfg)?));
    }
    let failed = reports.iter().any(|(_, r)| {
        matches!(r.status, BlowUpStatus::NumericFailure { .. } | BlowUpStatus::NoNontrivialSolution)
    });
    let text = match args.output.format {
        Format::Csv => {
            let mut s = stamp(&args.output).map(|s| format!("# {s}\n")).unwrap_or_default();
            s.push_str(SWEEP_HEADER);
            s.push('\n');
            for (h, r) in &reports {
                s.push_str(&row_line(&row_from_report(c, *h, r)));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let runs = reports.iter().map(|(h, r)| RunEntry { c, h: *h, report: r }).collect();
            stamped_json(&RunJson { problem: &loaded.problem.label, case: kind, runs }, &args.output)?
        }
    };
    Ok(Outcome { text, exit: u8::from(failed) })
}

fn sweep_record(args: &SweepArgs) -> Result<(LoadedProblem, SweepRecord), CliError> {
    let loaded = load_problem(&args.problem)?;
    let solve = &args.solve;
    let kind = match (solve.case, solve.c_grid.is_some()) {
        (Some(1), true) => CaseKind::Case1,
        (Some(2), true) => CaseKind::Case2,
        _ => case_kind(solve)?,
    };
    let grid = match solve.c1.or(solve.c2) {
        Some(c) => vec![c],
        None => sweep_grid(solve, kind, &loaded)?,
    };
    check_stepsizes(&solve.h)?;
    let base = base_config(solve, kind, grid[0]);
    let record = sweep_parameter(&loaded.problem, kind, &grid, &solve.h, &base)?;
    Ok((loaded, record))
}

#[derive(Serialize)]
struct SweepJson<'a> {
    problem: &'a str,
    #[serde(flatten)]
    record: &'a SweepRecord,
}

pub fn sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let (loaded, record) = sweep_record(args)?;
    let succeeded = record
        .rows
        .iter()
        .any(|r| matches!(r.status, RowStatus::BlowUp | RowStatus::ReachedHorizon));
    let text = match args.output.format {
        Format::Csv => sweep_csv(&record, stamp(&args.output).as_deref()),
        Format::Json => stamped_json(&SweepJson { problem: &loaded.problem.label, record: &record }, &args.output)?,
    };
    Ok(Outcome { text, exit: u8::from(!succeeded) })
}

#[derive(Serialize)]
struct IntersectJson {
    h: [f64; 2],
    c: f64,
    t: f64,
    rel_error: Option<f64>,
    crossings: Vec<Crossing>,
}

pub fn intersect(args: &SweepArgs) -> Result<Outcome, CliError> {
    let h = &args.solve.h;
    if h.len() != 2 || h[0] == h[1] {
        return Err(usage("intersect needs exactly two different stepsizes, e.g. --h 0.01,0.005"));
    }
    if args.solve.c1.is_some() || args.solve.c2.is_some() {
        return Err(usage("intersect sweeps a grid; use --case with --c-grid instead of --c1/--c2"));
    }
    let (loaded, record) = sweep_record(args)?;
    let curve = |h: f64| record.curve(h).expect("swept stepsize");
    let found = match intersect_curves(&curve(h[0]), &curve(h[1])) {
        Ok(i) => i,
        Err(e @ (volterra_blowup::Error::NoIntersection { .. } | volterra_blowup::Error::CurvesCoincide)) => {
            return Ok(Outcome { text: format!("# {e}\n"), exit: 1 });
        }
        Err(e) => return Err(e.into()),
    };
    let rel_error = loaded.problem.reference.map(|r| ((found.t - r) / r).abs());
    let text = match args.output.format {
        Format::Csv => {
            let mut s = stamp(&args.output).map(|s| format!("# {s}\n")).unwrap_or_default();
            s.push_str("c,t,h_a,h_b,rel_error\n");
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                sig9(found.c),
                sig9(found.t),
                sig9(h[0]),
                sig9(h[1]),
                rel_error.map(sig9).unwrap_or_default()
            ));
            s
        }
        Format::Json => stamped_json(
            &IntersectJson { h: [h[0], h[1]], c: found.c, t: found.t, rel_error, crossings: found.crossings },
            &args.output,
        )?,
    };
    Ok(Outcome { text, exit: 0 })
}

#[derive(Serialize)]
struct CheckJson<'a> {
    problem: &'a str,
    validation: &'a ValidationReport,
    growth: &'a GrowthReport,
    integral_condition: &'a IntegralConditionReport,
    conclusion: &'a str,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// The overall reading of a check.
pub fn conclusion(validation: &ValidationReport, growth: &GrowthReport, integral: IntegralVerdict) -> &'static str {
    if validation.failures().next().is_some() {
        "general conditions violated"
    } else if growth.unconditional_existence() {
        "no blow-up expected (unconditional existence)"
    } else if integral == IntegralVerdict::Diverges {
        "no blow-up expected (integral condition diverges)"
    } else if growth.blow_up_possible() && integral == IntegralVerdict::Converges {
        "blow-up possible"
    } else {
        "inconclusive"
    }
}

pub fn check(args: &CheckArgs) -> Result<Outcome, CliError> {
    let loaded = load_problem(&args.problem)?;
    let alpha = args
        .alpha
        .or(loaded.abel_exponent)
        .ok_or_else(|| usage("the kernel's Abel exponent is unknown; pass --alpha"))?;
    let p = &loaded.problem;
    let validation = validate_general_conditions(&p.kernel, &p.nonlinearity, &ValidationGrid::default())?;
    let growth = classify_growth(&p.nonlinearity, &default_near_grid(), &default_far_grid())?;
    let integral = integral_condition(&p.nonlinearity, alpha, args.delta)?;
    let verdict = conclusion(&validation, &growth, integral.verdict);
    let failed = validation.checks.iter().any(|c| c.status == CheckStatus::Fail);

    let text = match args.output.format {
        Format::Csv => {
            let mut s = stamp(&args.output).map(|s| format!("# {s}\n")).unwrap_or_default();
            s.push_str("item,status,detail\n");
            let mut line = |item: &str, status: &str, detail: &str| {
                s.push_str(&format!("{},{},{}\n", csv_field(item), csv_field(status), csv_field(detail)));
            };
            for c in &validation.checks {
                line(&snake(&c.condition), &snake(&c.status), &c.note);
            }
            let trends = [
                ("g_over_y_unbounded_near_zero", &growth.g_over_y_unbounded_near_zero),
                ("g_over_y_unbounded_away_from_zero", &growth.g_over_y_unbounded_away_from_zero),
                ("y_over_g_bounded_away_from_zero", &growth.y_over_g_bounded_away_from_zero),
            ];
            for (name, trend) in trends {
                let last = trend.samples.last().map(|&(y, r)| format!("ratio {} at y = {}", sig9(r), sig9(y)));
                line(name, &snake(&trend.verdict), &last.unwrap_or_default());
            }
            let last = integral.partial_integrals.last().copied().unwrap_or(0.0);
            let detail = format!(
                "alpha = {}, delta = {}, integral up to {} is {}",
                sig9(alpha),
                sig9(args.delta),
                sig9(*integral.upper_limits.last().unwrap_or(&0.0)),
                sig9(last)
            );
            line("integral_condition", &snake(&integral.verdict), &detail);
            line("conclusion", verdict, "");
            s
        }
        Format::Json => stamped_json(
            &CheckJson {
                problem: &p.label,
                validation: &validation,
                growth: &growth,
                integral_condition: &integral,
                conclusion: verdict,
            },
            &args.output,
        )?,
    };
    Ok(Outcome { text, exit: u8::from(failed) })
}
