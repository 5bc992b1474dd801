//! User problem files.
//!
//! ```toml
//! label = "cubic growth"
//! kernel = "abel(0.5)"       # one | linear_convolution | abel(gamma) | expression
//! nonlinearity = "y^3"       # example1 | example2 | power(a) | expression in y
//! reference = 0.9            # optional blow-up time for relative errors
//! singularity = 0.5          # optional, for expression kernels behaving like u^-gamma
//! abel_exponent = 0.5        # optional, used by `check`
//! ```
//!
//! Kernel expressions may use `u = t - s` alone (a convolution kernel) or `t`
//! and `s`.

use std::path::Path;

use serde::Deserialize;
use statrs::function::gamma::gamma;
use volterra_blowup::{Example, Kernel, Nonlinearity, Problem};

use crate::error::CliError;
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub label: Option<String>,
    pub kernel: String,
    pub nonlinearity: String,
    pub reference: Option<f64>,
    pub singularity: Option<f64>,
    pub abel_exponent: Option<f64>,
}

/// A problem with what the commands need to know about it.
#[derive(Debug, Clone)]
pub struct LoadedProblem {
    pub problem: Problem,
    /// `alpha` with `k(u) = u^(alpha - 1) / Gamma(alpha)`, when known.
    pub abel_exponent: Option<f64>,
    pub example: Option<Example>,
}

impl LoadedProblem {
    pub fn example(e: Example) -> Self {
        let alpha = match e {
            Example::One | Example::Two => 1.0,
            Example::Three => 2.0,
            Example::Four => 0.5,
        };
        Self { problem: e.problem(), abel_exponent: Some(alpha), example: Some(e) }
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
        let file: ProblemFile = toml::from_str(&text)
            .map_err(|e| CliError::ProblemFile { path: path.display().to_string(), detail: e.to_string() })?;
        file.build()
    }
}

/// The argument of `name(x)`, if `s` has that shape.
fn call_arg<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')').map(str::trim)
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("{what}: {s:?} is not a number")))
}

impl ProblemFile {
    pub fn build(&self) -> Result<LoadedProblem, CliError> {
        let (kernel, inferred_alpha) = self.kernel()?;
        let nonlinearity = self.nonlinearity()?;
        let label = self.label.clone().unwrap_or_else(|| format!("{} / {}", kernel.label(), nonlinearity.label()));
        let mut problem = Problem::new(label, kernel, nonlinearity);
        if let Some(r) = self.reference {
            if !(r > 0.0 && r.is_finite()) {
                return Err(CliError::Usage(format!("reference must be positive, got {r}")));
            }
            problem = problem.with_reference(r);
        }
        Ok(LoadedProblem { problem, abel_exponent: self.abel_exponent.or(inferred_alpha), example: None })
    }

    fn kernel(&self) -> Result<(Kernel, Option<f64>), CliError> {
        let src = self.kernel.trim();
        let (kernel, alpha) = match src {
            "one" => (Kernel::one(), Some(1.0)),
            "linear_convolution" => (Kernel::linear_convolution(), Some(2.0)),
            _ => {
                if let Some(arg) = call_arg(src, "abel") {
                    let g = number(arg, "abel exponent")?;
                    if !(0.0..1.0).contains(&g) {
                        return Err(CliError::Usage(format!("abel(gamma) needs 0 <= gamma < 1, got {g}")));
                    }
                    let scale = 1.0 / gamma(1.0 - g);
                    let k = Kernel::convolution(format!("abel({g})"), move |u| scale * u.powf(-g)).with_singularity(g);
                    (k, Some(1.0 - g))
                } else {
                    let e = Expr::parse(src, &["u", "t", "s"])?;
                    let k = if e.uses("t") || e.uses("s") {
                        Kernel::general(src, move |t, s| e.eval(&[t - s, t, s]))
                    } else {
                        Kernel::convolution(src, move |u| e.eval(&[u, 0.0, 0.0]))
                    };
                    (k, None)
                }
            }
        };
        Ok(match self.singularity {
            Some(g) if !(0.0..1.0).contains(&g) => {
                return Err(CliError::Usage(format!("singularity needs 0 <= gamma < 1, got {g}")))
            }
            Some(g) => (kernel.with_singularity(g), alpha),
            None => (kernel, alpha),
        })
    }

    fn nonlinearity(&self) -> Result<Nonlinearity, CliError> {
        let src = self.nonlinearity.trim();
        Ok(match src {
            "example1" => Nonlinearity::example1(),
            "example2" => Nonlinearity::example2(),
            _ => {
                if let Some(arg) = call_arg(src, "power") {
                    let a = number(arg, "power exponent")?;
                    if !(a > 0.0) {
                        return Err(CliError::Usage(format!("power(a) needs a > 0, got {a}")));
                    }
                    Nonlinearity::power(a)
                } else {
                    let e = Expr::parse(src, &["y"])?;
                    Nonlinearity::new(src, move |y| e.eval(&[y]))
                }
            }
        })
    }
}
