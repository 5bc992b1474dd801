//! Collocation solutions of homogeneous Volterra–Hammerstein equations
//!
//! ```text
//! y(t) = int_0^t K(t, s) G(y(s)) ds
//! ```
//!
//! and estimation of their blow-up time.
//!
//! The solver works on the implicitly linear form `z = G(V z)` with piecewise
//! constant (case 1) or piecewise linear, left-endpoint (case 2) collocation.
//! Each mesh interval reduces to one scalar equation `y = G(alpha + beta*y)`;
//! when it has no attracting fixed point the stepsize is halved, and once the
//! step falls below a tolerance the elapsed time is the blow-up estimate.
//!
//! ```
//! use volterra_blowup::{estimate_blowup, CollocationCase, CollocationConfig, Example};
//!
//! let config = CollocationConfig::new(CollocationCase::radau_one(), 0.1);
//! let report = estimate_blowup(&Example::One.problem(), &config)?;
//! let t = report.estimate().expect("example 1 blows up");
//! assert!((t - 3.0).abs() < 0.01);
//! # Ok::<(), volterra_blowup::Error>(())
//! ```

pub mod analysis;
pub mod blowup;
pub mod catalog;
pub mod config;
pub mod error;
pub mod kernel;
pub mod lagrange;
pub mod nonlinearity;
pub mod quadrature;
pub mod solution;
pub mod solver;
pub mod validate;

pub use analysis::{classify_growth, integral_condition, GrowthReport, IntegralConditionReport, IntegralVerdict, Verdict};
pub use blowup::{
    estimate_blowup, estimate_blowup_with, intersect_curves, parameter_grid, sweep_parameter, BlowUpReport,
    BlowUpStatus, Curve, Intersection, RowStatus, SweepRecord, SweepRow, SweepSummary,
};
pub use catalog::{Example, Problem};
pub use config::{CaseKind, CollocationCase, CollocationConfig, FixedPointControls, FixedPointStrategy};
pub use error::{Error, Result};
pub use kernel::{AffineMoments, AnalyticMoments, Kernel, KernelForm, MomentQuery};
pub use lagrange::{lagrange_basis, CollocationParams};
pub use nonlinearity::Nonlinearity;
pub use quadrature::{coefficient_integral, lag_term, LagState, QuadratureRule, SingularityMode};
pub use solution::CollocationSolution;
pub use solver::{
    example1_fixed_point, fixed_point_example1, fixed_point_general, solve_fixed_mesh, StepEquation, StepOutcome,
};
pub use validate::{validate_general_conditions, ValidationGrid, ValidationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/overview.md")]
    pub struct Overview;
    #[doc = include_str!("../../../book/src/collocation.md")]
    pub struct Collocation;
    #[doc = include_str!("../../../book/src/fixed-points.md")]
    pub struct FixedPoints;
    #[doc = include_str!("../../../book/src/quadrature.md")]
    pub struct Quadrature;
    #[doc = include_str!("../../../book/src/blow-up.md")]
    pub struct BlowUp;
    #[doc = include_str!("../../../book/src/sweeps.md")]
    pub struct Sweeps;
    #[doc = include_str!("../../../book/src/conditions.md")]
    pub struct Conditions;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
