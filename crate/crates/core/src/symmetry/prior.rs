//! Prior densities tabulated on a quadrature grid.

use crate::error::{Error, Result};
use crate::numerics::interp::hermite;
use crate::numerics::Grid1D;

/// Functional family of a prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriorKind {
    /// Constant density; location parameters.
    Flat,
    /// `1 / theta`; scale parameters.
    JeffreysScale,
    /// `1 / [theta (1 - theta)]`; weight parameters on (0, 1).
    Weight,
    /// `sqrt(I(theta))` from a Fisher information curve.
    Geometric,
    /// Anything else supplied as a table.
    Custom,
    /// All mass on one node.
    PointMass,
}

impl PriorKind {
    /// Unnormalized closed form, for the families that have one.
    pub fn unnormalized(self, theta: f64) -> Option<f64> {
        match self {
            PriorKind::Flat => Some(1.0),
            PriorKind::JeffreysScale => Some(1.0 / theta),
            PriorKind::Weight => Some(1.0 / (theta * (1.0 - theta))),
            _ => None,
        }
    }
}

/// A normalized density on a grid, `int p = 1` by the grid's quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorDensity {
    grid: Grid1D,
    density: Vec<f64>,
    cumulative: Vec<f64>,
    kind: PriorKind,
    normalization: f64,
}

/// Builds one of the closed-form ignorance priors on `grid`.
pub fn make_ignorance_prior(kind: PriorKind, grid: &Grid1D) -> Result<PriorDensity> {
    let (lo, hi) = (grid.lower(), grid.upper());
    match kind {
        PriorKind::Flat => {}
        PriorKind::JeffreysScale => {
            if !(lo > 0.0) {
                return Err(Error::InvalidPrior(format!(
                    "scale prior needs theta > 0, grid starts at {lo}"
                )));
            }
        }
        PriorKind::Weight => {
            if !(lo > 0.0 && hi < 1.0 && 1.0 - hi > f64::EPSILON && lo > f64::MIN_POSITIVE) {
                return Err(Error::InvalidPrior(format!(
                    "weight prior needs 0 < theta < 1 at grid resolution, grid is [{lo}, {hi}]"
                )));
            }
        }
        other => {
            return Err(Error::InvalidPrior(format!("{other:?} is not a closed-form ignorance prior")))
        }
    }
    let values: Vec<f64> = grid.nodes().iter().map(|&t| kind.unnormalized(t).unwrap()).collect();
    PriorDensity::from_unnormalized(grid, values, kind)
}

/// Jeffreys's general rule: density proportional to `sqrt(I)`.
pub fn prior_from_fisher_curve(fisher: &[f64], grid: &Grid1D) -> Result<PriorDensity> {
    grid.check_len(fisher.len())?;
    if let Some(k) = fisher.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidPrior(format!(
            "Fisher information must be finite and nonnegative, got {} at node {k}",
            fisher[k]
        )));
    }
    if fisher.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidPrior("Fisher information vanishes everywhere".into()));
    }
    let values = fisher.iter().map(|v| v.sqrt()).collect();
    PriorDensity::from_unnormalized(grid, values, PriorKind::Geometric)
}

impl PriorDensity {
    /// Normalizes a nonnegative table over `grid`.
    pub fn from_unnormalized(grid: &Grid1D, values: Vec<f64>, kind: PriorKind) -> Result<Self> {
        grid.check_len(values.len())?;
        if let Some(k) = values.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidPrior(format!("density {} at node {k}", values[k])));
        }
        let z = grid.integrate(&values)?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::InvalidPrior(format!("normalization constant {z}")));
        }
        let density: Vec<f64> = values.iter().map(|v| v / z).collect();
        let cumulative = grid.cumulative(&density)?;
        Ok(Self { grid: grid.clone(), density, cumulative, kind, normalization: z })
    }

    /// Any nonnegative table, normalized.
    pub fn custom(grid: &Grid1D, values: Vec<f64>) -> Result<Self> {
        Self::from_unnormalized(grid, values, PriorKind::Custom)
    }

    /// All mass on the node nearest `theta`.
    pub fn point_mass(grid: &Grid1D, theta: f64) -> Result<Self> {
        if !grid.contains(theta) {
            return Err(Error::InvalidPrior(format!("point mass at {theta} lies outside the grid")));
        }
        let k = grid.nearest_index(theta);
        let mut density = vec![0.0; grid.len()];
        density[k] = 1.0 / grid.weights()[k];
        let cumulative = (0..grid.len()).map(|i| if i >= k { 1.0 } else { 0.0 }).collect();
        Ok(Self { grid: grid.clone(), density, cumulative, kind: PriorKind::PointMass, normalization: 1.0 })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Running integral of the density from the lower grid end.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    /// Integral of the unnormalized table this prior was built from.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `int p(theta) g(theta) d theta` for `g` tabulated on the grid.
    pub fn expectation(&self, values: &[f64]) -> Result<f64> {
        self.grid.check_len(values.len())?;
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(&self.density)
            .zip(values)
            .map(|((w, p), v)| w * p * v)
            .sum())
    }

    /// Density at an arbitrary point: closed form for the analytic families,
    /// linear interpolation of the table otherwise.
    pub fn density_at(&self, theta: f64) -> f64 {
        if !self.grid.contains(theta) {
            return 0.0;
        }
        if let Some(v) = self.kind.unnormalized(theta) {
            return v / self.normalization;
        }
        let (i, x0, x1) = self.grid.bracket(theta);
        let t = (theta - x0) / (x1 - x0);
        (1.0 - t) * self.density[i] + t * self.density[i + 1]
    }

    /// `int_{lower}^{theta} p`, interpolated with the density as slope.
    pub fn cdf_at(&self, theta: f64) -> f64 {
        if theta <= self.grid.lower() {
            return 0.0;
        }
        if theta >= self.grid.upper() {
            return self.cumulative[self.cumulative.len() - 1];
        }
        let (i, x0, x1) = self.grid.bracket(theta);
        let (c0, c1) = (self.cumulative[i], self.cumulative[i + 1]);
        if self.kind == PriorKind::PointMass {
            return if theta >= x1 { c1 } else { c0 };
        }
        hermite(x0, x1, c0, c1, self.density[i], self.density[i + 1], theta)
    }

    /// Mass between two points, signed by their order.
    pub fn mass_between(&self, from: f64, to: f64) -> f64 {
        match self.closed_form_mass(from, to) {
            Some(v) => v,
            None => self.cdf_at(to) - self.cdf_at(from),
        }
    }

    fn closed_form_mass(&self, from: f64, to: f64) -> Option<f64> {
        if !(self.grid.contains(from) && self.grid.contains(to)) {
            return None;
        }
        let antiderivative = |x: f64| match self.kind {
            PriorKind::Flat => Some(x),
            PriorKind::JeffreysScale => Some(x.ln()),
            PriorKind::Weight => Some((x / (1.0 - x)).ln()),
            _ => None,
        };
        Some((antiderivative(to)? - antiderivative(from)?) / self.normalization)
    }

    /// Shares grid and density with `other` up to rounding.
    pub fn same_grid(&self, grid: &Grid1D) -> Result<()> {
        if self.grid.same_as(grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// `|A int_theta^theta_est p|^k`, the loss induced by a prior.
///
/// With `k = 2` and `A` equal to [`PriorDensity::normalization`] this is the
/// quadratic loss of the symmetry function built from the unnormalized prior.
pub fn loss_from_prior(prior: &PriorDensity, k: f64, a: f64, theta_est: f64, theta: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("loss exponent must be positive, got {k}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("loss scale must be positive, got {a}")));
    }
    for v in [theta_est, theta] {
        if !prior.grid().contains(v) {
            return Err(Error::Domain(format!("{v} lies outside the hypothesis range")));
        }
    }
    if theta_est == theta {
        return Ok(0.0);
    }
    Ok((a * prior.mass_between(theta, theta_est)).abs().powf(k))
}
