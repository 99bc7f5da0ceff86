//! Fixed one-dimensional quadrature grids.
//!
//! A grid is uniform in a coordinate `u(theta)`: `u = theta` (linear),
//! `u = ln theta` (logarithmic) or `u = ln(theta / (1 - theta))` (logit).
//! Weights are composite Simpson weights in `u` times the Jacobian
//! `d theta / d u`, so `sum_i w_i g(theta_i)` approximates `int g(theta) d theta`.
//! Grids with an odd number of intervals close with a Simpson 3/8 panel.

use crate::error::{Error, Result};

/// Smallest grid accepted.
pub const MIN_NODES: usize = 16;

/// Node count used when callers do not choose one.
pub const DEFAULT_NODES: usize = 1024;

/// How nodes are distributed over the hypothesis range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spacing {
    Linear,
    Logarithmic,
    /// Uniform in log-odds; for parameters on (0, 1) with mass near both ends.
    Logit,
}

impl Spacing {
    fn to_coordinate(self, theta: f64) -> f64 {
        match self {
            Spacing::Linear => theta,
            Spacing::Logarithmic => theta.ln(),
            Spacing::Logit => (theta / (1.0 - theta)).ln(),
        }
    }

    fn to_node(self, u: f64) -> f64 {
        match self {
            Spacing::Linear => u,
            Spacing::Logarithmic => u.exp(),
            Spacing::Logit => 1.0 / (1.0 + (-u).exp()),
        }
    }

    /// d theta / d u at `theta`.
    fn jacobian(self, theta: f64) -> f64 {
        match self {
            Spacing::Linear => 1.0,
            Spacing::Logarithmic => theta,
            Spacing::Logit => theta * (1.0 - theta),
        }
    }
}

/// Quadrature nodes and weights over `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    jacobian: Vec<f64>,
    spacing: Spacing,
    u_start: f64,
    step: f64,
}

impl Grid1D {
    pub fn linear(lower: f64, upper: f64, n: usize) -> Result<Self> {
        Self::build(lower, upper, n, Spacing::Linear)
    }

    pub fn logarithmic(lower: f64, upper: f64, n: usize) -> Result<Self> {
        if !(lower > 0.0) {
            return Err(Error::InvalidGrid(format!("logarithmic grid needs lower > 0, got {lower}")));
        }
        Self::build(lower, upper, n, Spacing::Logarithmic)
    }

    pub fn logit(lower: f64, upper: f64, n: usize) -> Result<Self> {
        if !(lower > 0.0 && upper < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "logit grid needs 0 < lower < upper < 1, got [{lower}, {upper}]"
            )));
        }
        Self::build(lower, upper, n, Spacing::Logit)
    }

    pub fn new(lower: f64, upper: f64, n: usize, spacing: Spacing) -> Result<Self> {
        match spacing {
            Spacing::Linear => Self::linear(lower, upper, n),
            Spacing::Logarithmic => Self::logarithmic(lower, upper, n),
            Spacing::Logit => Self::logit(lower, upper, n),
        }
    }

    fn build(lower: f64, upper: f64, n: usize, spacing: Spacing) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidGrid(format!("need at least {MIN_NODES} nodes, got {n}")));
        }
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidGrid(format!("bad range [{lower}, {upper}]")));
        }
        let u0 = spacing.to_coordinate(lower);
        let u1 = spacing.to_coordinate(upper);
        let step = (u1 - u0) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n)
            .map(|i| spacing.to_node(u0 + step * i as f64))
            .collect();
        nodes[0] = lower;
        nodes[n - 1] = upper;
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("nodes are not strictly increasing at this resolution".into()));
        }
        let jacobian: Vec<f64> = nodes.iter().map(|&t| spacing.jacobian(t)).collect();
        let weights = simpson_weights(n, step)
            .into_iter()
            .zip(&jacobian)
            .map(|(w, j)| w * j)
            .collect();
        Ok(Self { nodes, weights, jacobian, spacing, u_start: u0, step })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn lower(&self) -> f64 {
        self.nodes[0]
    }

    pub fn upper(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lower() && theta <= self.upper()
    }

    /// Node index closest to `theta` in the grid coordinate.
    pub fn nearest_index(&self, theta: f64) -> usize {
        let u = self.spacing.to_coordinate(theta.clamp(self.lower(), self.upper()));
        (((u - self.u_start) / self.step).round() as usize).min(self.len() - 1)
    }

    /// `sum_i w_i values_i`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    /// Running integral `F_i = int_{lower}^{theta_i} g`, with `F_0 = 0`.
    ///
    /// Each interval uses the cubic through the four surrounding nodes in the
    /// grid coordinate, so the error is fourth order in the spacing.
    pub fn cumulative(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.check_len(values.len())?;
        let n = self.len();
        let g: Vec<f64> = values.iter().zip(&self.jacobian).map(|(v, j)| v * j).collect();
        let h = self.step / 24.0;
        let mut out = Vec::with_capacity(n);
        out.push(0.0);
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let piece = if i == 0 {
                9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]
            } else if i == n - 2 {
                g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]
            } else {
                -g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]
            };
            acc += h * piece;
            out.push(acc);
        }
        Ok(out)
    }

    /// Interval containing `theta` and the corresponding node spacing:
    /// returns `(i, x0, x1)` with `nodes[i] <= theta <= nodes[i + 1]`.
    pub(crate) fn bracket(&self, theta: f64) -> (usize, f64, f64) {
        let n = self.len();
        let i = self.nodes.partition_point(|&x| x <= theta).clamp(1, n - 1) - 1;
        (i, self.nodes[i], self.nodes[i + 1])
    }

    /// Grids are interchangeable when their nodes agree to rounding.
    pub fn same_as(&self, other: &Self) -> bool {
        self.spacing == other.spacing
            && self.len() == other.len()
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.len(), got: len })
        }
    }
}

fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let intervals = n - 1;
    let mut w = vec![0.0; n];
    let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if intervals % 2 == 1 {
        let s = simpson_end;
        for (k, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            w[s + k] += 3.0 * h / 8.0 * c;
        }
    }
    w
}

/// `sum_i weights_i * values_i` over `grid`.
pub fn integrate_grid(values: &[f64], grid: &Grid1D) -> Result<f64> {
    grid.integrate(values)
}
