//! CSV and JSON encoding of command results.
//!
//! Sweep CSV has the columns `c,h,estimate,status,steps,halvings`. Each
//! stepsize is followed by three footer rows in the same columns: `min` and
//! `max` (with the `c` where they occur) and `spread`, marked in `status`.

use std::fmt::Write as _;

use volterra_blowup::{RowStatus, SweepRecord, SweepRow, SweepSummary};

pub const SWEEP_HEADER: &str = "c,h,estimate,status,steps,halvings";

/// `x` with 9 significant digits, trailing zeros removed.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.8e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub fn row_line(row: &SweepRow) -> String {
    format!("{},{},{},{},{},{}", sig9(row.c), sig9(row.h), opt(row.estimate), row.status.as_str(), row.steps, row.halvings)
}

fn footer_lines(s: &SweepSummary) -> [String; 3] {
    [
        format!("{},{},{},min,,", sig9(s.min_c), sig9(s.h), sig9(s.min)),
        format!("{},{},{},max,,", sig9(s.max_c), sig9(s.h), sig9(s.max)),
        format!(",{},{},spread,,", sig9(s.h), sig9(s.spread)),
    ]
}

/// The sweep as CSV, each stepsize's rows followed by its footer.
pub fn sweep_csv(record: &SweepRecord, stamp: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(s) = stamp {
        let _ = writeln!(out, "# {s}");
    }
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for h in record.stepsizes() {
        for row in record.rows.iter().filter(|r| r.h == h) {
            out.push_str(&row_line(row));
            out.push('\n');
        }
        if let Some(s) = record.summary(h) {
            for line in footer_lines(s) {
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

/// Parsed CSV content: data rows and footer rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedSweep {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
}

fn field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, String> {
    s.parse().map_err(|_| format!("line {line}: cannot parse {s:?}"))
}

/// Reads back what [`sweep_csv`] writes.
pub fn parse_sweep_csv(text: &str) -> Result<ParsedSweep, String> {
    let mut out = ParsedSweep::default();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#') && !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == SWEEP_HEADER => {}
        other => return Err(format!("missing header, found {:?}", other.map(|x| x.1))),
    }
    let mut pending: Option<SweepSummary> = None;
    for (n, line) in lines {
        let n = n + 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(format!("line {n}: expected 6 fields, found {}", f.len()));
        }
        let h: f64 = field(f[1], n)?;
        match f[3] {
            "min" => {
                pending = Some(SweepSummary {
                    h,
                    min: field(f[2], n)?,
                    min_c: field(f[0], n)?,
                    max: f64::NAN,
                    max_c: f64::NAN,
                    spread: f64::NAN,
                })
            }
            "max" => {
                let s = pending.as_mut().ok_or(format!("line {n}: max before min"))?;
                s.max = field(f[2], n)?;
                s.max_c = field(f[0], n)?;
            }
            "spread" => {
                let mut s = pending.take().ok_or(format!("line {n}: spread before min"))?;
                s.spread = field(f[2], n)?;
                out.summaries.push(s);
            }
            status => out.rows.push(SweepRow {
                c: field(f[0], n)?,
                h,
                estimate: if f[2].is_empty() { None } else { Some(field(f[2], n)?) },
                status: RowStatus::parse(status).ok_or(format!("line {n}: unknown status {status:?}"))?,
                steps: field(f[4], n)?,
                halvings: field(f[5], n)?,
            }),
        }
    }
    Ok(out)
}
