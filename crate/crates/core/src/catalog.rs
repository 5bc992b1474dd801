//! Problem definitions and the four built-in examples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::nonlinearity::Nonlinearity;

/// A homogeneous equation `y(t) = int_0^t K(t, s) G(y(s)) ds`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub kernel: Kernel,
    pub nonlinearity: Nonlinearity,
    /// Known or assumed blow-up time, used for relative errors.
    pub reference: Option<f64>,
}

impl Problem {
    pub fn new(label: impl Into<String>, kernel: Kernel, nonlinearity: Nonlinearity) -> Self {
        Self { label: label.into(), kernel, nonlinearity, reference: None }
    }

    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Example {
    /// `K = 1`, `G` = `sqrt(y)` then `y^2`.
    One,
    /// `K = 1`, `G` = `sqrt(y)` then `exp(y - 1)`.
    Two,
    /// `K = t - s` with the first example's `G`.
    Three,
    /// `K = (pi (t - s))^(-1/2)` with the first example's `G`.
    Four,
}

impl Example {
    pub const ALL: [Example; 4] = [Example::One, Example::Two, Example::Three, Example::Four];

    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(Error::InvalidConfig(format!("no built-in example {n}; expected 1 to 4"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }

    pub fn reference(self) -> f64 {
        match self {
            Self::One | Self::Two => 3.0,
            Self::Three => 5.78482,
            Self::Four => 1.645842,
        }
    }

    /// The smallest collocation parameter used in the default case 1 sweep.
    pub fn default_case1_grid_start(self) -> f64 {
        match self {
            Self::Four => 0.05,
            _ => 0.01,
        }
    }

    pub fn kernel(self) -> Kernel {
        match self {
            Self::One | Self::Two => Kernel::one(),
            Self::Three => Kernel::linear_convolution(),
            Self::Four => Kernel::abel_half(),
        }
    }

    pub fn nonlinearity(self) -> Nonlinearity {
        match self {
            Self::Two => Nonlinearity::example2(),
            _ => Nonlinearity::example1(),
        }
    }

    pub fn problem(self) -> Problem {
        Problem::new(format!("example {}", self.number()), self.kernel(), self.nonlinearity())
            .with_reference(self.reference())
    }
}
