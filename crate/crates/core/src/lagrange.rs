//! Collocation parameters and the Lagrange fundamental polynomials built on them.
//!
//! A collocation solution on the interval `[t_n, t_n + h_n]` is written as
//! `z_h(t_n + v h_n) = sum_j L_j(v) Z_{n,j}` for `v` in `(0, 1]`. With a single
//! parameter the basis is the constant `L_1 = 1`.
//!
//! Indices are zero-based throughout the crate: `basis(0, v)` is `L_1(v)`.

use crate::error::{Error, Result};

/// Strictly increasing collocation parameters `0 <= c_1 < ... < c_m <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationParams {
    nodes: Vec<f64>,
    // Monomial coefficients of each L_j, lowest degree first.
    coefficients: Vec<Vec<f64>>,
}

impl CollocationParams {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidConfig("at least one collocation parameter is required".into()));
        }
        for &c in nodes {
            if !c.is_finite() || !(0.0..=1.0).contains(&c) {
                return Err(Error::InvalidConfig(format!(
                    "collocation parameter {c} must lie in [0, 1]"
                )));
            }
        }
        for w in nodes.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidConfig(format!(
                    "collocation parameters must be strictly increasing (got {} then {})",
                    w[0], w[1]
                )));
            }
        }
        let coefficients = (0..nodes.len()).map(|j| monomial_coefficients(nodes, j)).collect();
        Ok(Self { nodes: nodes.to_vec(), coefficients })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `L_j(v)` evaluated as a product, which is exact at the nodes.
    pub fn basis(&self, j: usize, v: f64) -> f64 {
        let cj = self.nodes[j];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &ck)| (v - ck) / (cj - ck))
            .product()
    }

    /// Interpolant `sum_j L_j(v) values[j]`.
    pub fn interpolate(&self, values: &[f64], v: f64) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values.iter().enumerate().map(|(j, &z)| self.basis(j, v) * z).sum()
    }

    /// `int_0^upper v^power L_j(v) dv`, computed from the monomial form.
    pub fn basis_moment(&self, j: usize, power: u32, upper: f64) -> f64 {
        self.coefficients[j]
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let e = k as i32 + power as i32 + 1;
                a * upper.powi(e) / e as f64
            })
            .sum()
    }
}

fn monomial_coefficients(nodes: &[f64], j: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    let cj = nodes[j];
    for (k, &ck) in nodes.iter().enumerate() {
        if k == j {
            continue;
        }
        let scale = 1.0 / (cj - ck);
        let mut next = vec![0.0; poly.len() + 1];
        for (d, &a) in poly.iter().enumerate() {
            next[d + 1] += a * scale;
            next[d] -= a * ck * scale;
        }
        poly = next;
    }
    poly
}

/// Free-function form of [`CollocationParams::basis`].
pub fn lagrange_basis(c: &[f64], j: usize, v: f64) -> Result<f64> {
    Ok(CollocationParams::new(c)?.basis(j, v))
}
