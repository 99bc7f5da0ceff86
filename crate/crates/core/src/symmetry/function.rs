//! Symmetry functions: monotone maps `f` turning a parameter into a location
//! parameter, so that `[f(est) - f(theta)]^2` is the natural loss.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::interp::{hermite, hermite_inverse, Inversion};
use crate::numerics::Grid1D;
use crate::symmetry::prior::PriorDensity;

/// Closed form behind a symmetry function, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryForm {
    /// `c1 theta + c2`.
    Identity,
    /// `c1 ln(theta / theta_u) + c2`; scale parameters.
    Logarithmic,
    /// `c1 artanh(2 theta - 1) + c2`; weight parameters.
    Hyperbolic,
    /// `c1 arctan(sqrt(theta / (1 - theta))) + c2`; geometric coherence prior.
    ArcTanOdds,
    /// `c1 arctan(sqrt(exp(t / theta) - 1)) + c2`; geometric lifetime prior.
    LifetimeGeometric { t: f64 },
    /// `c1 int p + c2` from a tabulated prior.
    Tabulated,
}

/// A strictly monotone `f` with its derivative, tabulated on a grid and
/// evaluated in closed form where one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFunction {
    grid: Grid1D,
    values: Vec<f64>,
    slopes: Vec<f64>,
    c1: f64,
    c2: f64,
    theta_u: f64,
    form: SymmetryForm,
}

/// `f(theta) = c1 int_{lower}^{theta} p + c2`.
pub fn symmetry_from_prior(prior: &PriorDensity, c1: f64, c2: f64) -> Result<SymmetryFunction> {
    if !(c1 != 0.0 && c1.is_finite() && c2.is_finite()) {
        return Err(Error::InvalidSymmetry(format!("need finite c1 != 0, got c1 = {c1}, c2 = {c2}")));
    }
    if let Some(k) = prior.density().iter().position(|&d| !(d > 0.0)) {
        return Err(Error::InvalidSymmetry(format!(
            "prior vanishes at node {k} (theta = {}); f would be flat there",
            prior.grid().nodes()[k]
        )));
    }
    let values = prior.cumulative().iter().map(|c| c1 * c + c2).collect();
    let slopes = prior.density().iter().map(|d| c1 * d).collect();
    SymmetryFunction::from_parts(prior.grid().clone(), values, slopes, c1, c2, 1.0, SymmetryForm::Tabulated)
}

impl SymmetryFunction {
    fn from_parts(
        grid: Grid1D,
        values: Vec<f64>,
        slopes: Vec<f64>,
        c1: f64,
        c2: f64,
        theta_u: f64,
        form: SymmetryForm,
    ) -> Result<Self> {
        let increasing = slopes[0] > 0.0;
        if let Some(k) = slopes.iter().position(|&d| !(d.is_finite() && (d > 0.0) == increasing && d != 0.0)) {
            return Err(Error::InvalidSymmetry(format!("derivative {} at node {k} breaks monotonicity", slopes[k])));
        }
        if let Some(k) = values.windows(2).position(|w| !((w[1] > w[0]) == increasing && w[1] != w[0])) {
            return Err(Error::NonMonotone(k + 1));
        }
        Ok(Self { grid, values, slopes, c1, c2, theta_u, form })
    }

    fn analytic(grid: &Grid1D, c1: f64, c2: f64, theta_u: f64, form: SymmetryForm) -> Result<Self> {
        if !(c1 != 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidSymmetry(format!("need finite c1 != 0, got c1 = {c1}, c2 = {c2}")));
        }
        let (lo, hi) = (grid.lower(), grid.upper());
        let domain_ok = match form {
            SymmetryForm::Identity | SymmetryForm::Tabulated => true,
            SymmetryForm::Logarithmic => lo > 0.0 && theta_u > 0.0,
            SymmetryForm::Hyperbolic | SymmetryForm::ArcTanOdds => lo > 0.0 && hi < 1.0,
            SymmetryForm::LifetimeGeometric { t } => lo > 0.0 && t > 0.0,
        };
        if !domain_ok {
            return Err(Error::InvalidSymmetry(format!("{form:?} undefined on [{lo}, {hi}]")));
        }
        let mut f = Self {
            grid: grid.clone(),
            values: Vec::new(),
            slopes: Vec::new(),
            c1,
            c2,
            theta_u,
            form,
        };
        f.values = grid.nodes().iter().map(|&t| f.closed_value(t)).collect();
        f.slopes = grid.nodes().iter().map(|&t| f.closed_slope(t)).collect();
        Self::from_parts(f.grid, f.values, f.slopes, c1, c2, theta_u, form)
    }

    /// `c1 theta + c2`.
    pub fn identity(grid: &Grid1D) -> Result<Self> {
        Self::analytic(grid, 1.0, 0.0, 1.0, SymmetryForm::Identity)
    }

    /// `ln(theta / theta_u)`.
    pub fn logarithmic(grid: &Grid1D, theta_u: f64) -> Result<Self> {
        Self::analytic(grid, 1.0, 0.0, theta_u, SymmetryForm::Logarithmic)
    }

    /// `2 artanh(2 theta - 1)`.
    pub fn hyperbolic(grid: &Grid1D) -> Result<Self> {
        Self::analytic(grid, 2.0, 0.0, 1.0, SymmetryForm::Hyperbolic)
    }

    /// `2 arctan(sqrt(theta / (1 - theta)))`.
    pub fn arctan_odds(grid: &Grid1D) -> Result<Self> {
        Self::analytic(grid, 2.0, 0.0, 1.0, SymmetryForm::ArcTanOdds)
    }

    /// `2 arctan(sqrt(exp(t / theta) - 1)) - pi = -2 arcsin(exp(-t / 2 theta))`,
    /// decreasing in `theta`.
    ///
    /// The offset keeps values near `theta << t` resolvable in floating point.
    pub fn lifetime_geometric(grid: &Grid1D, t: f64) -> Result<Self> {
        Self::analytic(grid, 2.0, -PI, 1.0, SymmetryForm::LifetimeGeometric { t })
    }

    /// A closed form with explicit constants.
    pub fn with_constants(grid: &Grid1D, form: SymmetryForm, c1: f64, c2: f64, theta_u: f64) -> Result<Self> {
        if form == SymmetryForm::Tabulated {
            return Err(Error::InvalidSymmetry("tabulated functions come from a prior".into()));
        }
        Self::analytic(grid, c1, c2, theta_u, form)
    }

    fn closed_value(&self, theta: f64) -> f64 {
        let (c1, c2) = (self.c1, self.c2);
        match self.form {
            SymmetryForm::Identity => c1 * theta + c2,
            SymmetryForm::Logarithmic => c1 * (theta / self.theta_u).ln() + c2,
            SymmetryForm::Hyperbolic => c1 * (2.0 * theta - 1.0).atanh() + c2,
            SymmetryForm::ArcTanOdds => c1 * (theta / (1.0 - theta)).sqrt().atan() + c2,
            SymmetryForm::LifetimeGeometric { t } => {
                (c2 + c1 * FRAC_PI_2) - c1 * (-t / (2.0 * theta)).exp().asin()
            }
            SymmetryForm::Tabulated => unreachable!("tabulated values come from the table"),
        }
    }

    fn closed_slope(&self, theta: f64) -> f64 {
        let c1 = self.c1;
        match self.form {
            SymmetryForm::Identity => c1,
            SymmetryForm::Logarithmic => c1 / theta,
            SymmetryForm::Hyperbolic => c1 / (2.0 * theta * (1.0 - theta)),
            SymmetryForm::ArcTanOdds => c1 / (2.0 * (theta * (1.0 - theta)).sqrt()),
            SymmetryForm::LifetimeGeometric { t } => {
                let x = t / theta;
                -c1 * t / (2.0 * theta * theta) * (-0.5 * x).exp() / (-(-x).exp_m1()).sqrt()
            }
            SymmetryForm::Tabulated => unreachable!("tabulated slopes come from the table"),
        }
    }

    fn closed_inverse(&self, y: f64) -> f64 {
        let z = (y - self.c2) / self.c1;
        match self.form {
            SymmetryForm::Identity => z,
            SymmetryForm::Logarithmic => self.theta_u * z.exp(),
            SymmetryForm::Hyperbolic => 0.5 * (1.0 + z.tanh()),
            SymmetryForm::ArcTanOdds => z.clamp(0.0, PI / 2.0).sin().powi(2),
            SymmetryForm::LifetimeGeometric { t } => {
                let w = ((self.c2 + self.c1 * FRAC_PI_2 - y) / self.c1).clamp(0.0, FRAC_PI_2);
                t / (-2.0 * w.sin().ln())
            }
            SymmetryForm::Tabulated => unreachable!("tabulated inverse uses the table"),
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// `f` at the grid nodes.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `f'` at the grid nodes.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn theta_u(&self) -> f64 {
        self.theta_u
    }

    pub fn form(&self) -> SymmetryForm {
        self.form
    }

    pub fn is_increasing(&self) -> bool {
        self.slopes[0] > 0.0
    }

    /// `(min f, max f)` over the grid.
    pub fn range(&self) -> (f64, f64) {
        let (a, b) = (self.values[0], self.values[self.values.len() - 1]);
        (a.min(b), a.max(b))
    }

    pub fn value(&self, theta: f64) -> f64 {
        if self.form != SymmetryForm::Tabulated {
            return self.closed_value(theta);
        }
        let (i, x0, x1) = self.grid.bracket(theta);
        hermite(x0, x1, self.values[i], self.values[i + 1], self.slopes[i], self.slopes[i + 1], theta)
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        if self.form != SymmetryForm::Tabulated {
            return self.closed_slope(theta);
        }
        let (i, x0, x1) = self.grid.bracket(theta);
        crate::numerics::interp::hermite_slope(
            x0, x1, self.values[i], self.values[i + 1], self.slopes[i], self.slopes[i + 1], theta,
        )
    }

    /// `f^{-1}(y)`, clamped to the grid range when `y` leaves the range of `f`.
    pub fn inverse(&self, y: f64) -> Inversion {
        let (lo, hi) = self.range();
        let n = self.values.len();
        if y < lo || y > hi || !y.is_finite() {
            let at_low_theta = (y < lo) == self.is_increasing();
            let x = if at_low_theta { self.grid.lower() } else { self.grid.upper() };
            return Inversion { x, clamped: true };
        }
        if self.form != SymmetryForm::Tabulated {
            let x = self.closed_inverse(y).clamp(self.grid.lower(), self.grid.upper());
            return Inversion { x, clamped: false };
        }
        let increasing = self.is_increasing();
        let k = if increasing {
            self.values.partition_point(|&v| v <= y)
        } else {
            self.values.partition_point(|&v| v >= y)
        }
        .clamp(1, n - 1)
            - 1;
        let xs = self.grid.nodes();
        let x = hermite_inverse(
            xs[k],
            xs[k + 1],
            self.values[k],
            self.values[k + 1],
            self.slopes[k],
            self.slopes[k + 1],
            y,
        );
        Inversion { x: x.clamp(xs[k], xs[k + 1]), clamped: false }
    }

    /// Node-wise agreement with another function on the same grid.
    pub fn agrees_with(&self, other: &Self, tolerance: f64) -> bool {
        self.grid.same_as(&other.grid)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= tolerance * a.abs().max(b.abs()).max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::prior::{make_ignorance_prior, prior_from_fisher_curve, PriorKind};

    #[test]
    fn jeffreys_gives_logarithm() {
        let theta_u = 1.5;
        let g = Grid1D::logarithmic(0.1, 20.0, 1024).unwrap();
        let prior = make_ignorance_prior(PriorKind::JeffreysScale, &g).unwrap();
        let z = prior.normalization();
        let f = symmetry_from_prior(&prior, z, 0.0).unwrap();
        let e = std::f64::consts::E;
        assert!((f.value(e * theta_u) - f.value(theta_u) - 1.0).abs() < 1e-10);
        let log = SymmetryFunction::logarithmic(&g, theta_u).unwrap();
        let shift = f.values()[0] - log.values()[0];
        for (a, b) in f.values().iter().zip(log.values()) {
            assert!((a - b - shift).abs() < 1e-10);
        }
    }

    #[test]
    fn weight_gives_hyperbolic() {
        let a: f64 = 0.95;
        let g = Grid1D::logit(1.0 - a, a, 1025).unwrap();
        let prior = make_ignorance_prior(PriorKind::Weight, &g).unwrap();
        let z = prior.normalization();
        let c2 = 0.7;
        // the cumulative starts at 1 - a, where 2 artanh(2 theta - 1) = -z / 2
        let f = symmetry_from_prior(&prior, z, c2 - z / 2.0).unwrap();
        assert!((f.value(0.5) - c2).abs() < 1e-10);
        for (&t, v) in g.nodes().iter().zip(f.values()) {
            assert!((v - (2.0 * (2.0 * t - 1.0).atanh() + c2)).abs() < 1e-10);
        }
        let h = SymmetryFunction::hyperbolic(&g).unwrap();
        assert!(h.value(0.5).abs() < 1e-15);
    }

    #[test]
    fn geometric_coherence_gives_arctan() {
        let g = Grid1D::logit(1e-6, 1.0 - 1e-6, 2049).unwrap();
        let fisher: Vec<f64> = g.nodes().iter().map(|t| 81.0 / (100.0 * t * (1.0 - t))).collect();
        let prior = prior_from_fisher_curve(&fisher, &g).unwrap();
        // sqrt(I) = 0.9 / sqrt(theta (1 - theta)) = 0.9 f'
        let c1 = prior.normalization() / 0.9;
        let c2 = 2.0 * (1e-6f64 / (1.0 - 1e-6)).sqrt().atan();
        let f = symmetry_from_prior(&prior, c1, c2).unwrap();
        assert!((f.value(0.5) - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        let closed = SymmetryFunction::arctan_odds(&g).unwrap();
        assert!((closed.value(0.5) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(f.agrees_with(&closed, 1e-8));
    }

    #[test]
    fn closed_forms_round_trip() {
        let g = Grid1D::logit(0.01, 0.99, 64).unwrap();
        let gl = Grid1D::logarithmic(0.1, 10.0, 64).unwrap();
        let fs = [
            SymmetryFunction::hyperbolic(&g).unwrap(),
            SymmetryFunction::arctan_odds(&g).unwrap(),
            SymmetryFunction::logarithmic(&gl, 2.0).unwrap(),
            SymmetryFunction::lifetime_geometric(&gl, 1.0).unwrap(),
            SymmetryFunction::identity(&gl).unwrap(),
        ];
        for f in &fs {
            for &t in f.grid().nodes().iter().step_by(7) {
                let inv = f.inverse(f.value(t));
                assert!(!inv.clamped);
                assert!((inv.x - t).abs() < 1e-10 * t.max(1.0), "{:?} at {t}: {}", f.form(), inv.x);
            }
        }
    }

    #[test]
    fn slopes_match_finite_differences() {
        let g = Grid1D::logarithmic(0.1, 10.0, 2048).unwrap();
        let f = SymmetryFunction::lifetime_geometric(&g, 1.0).unwrap();
        assert!(!f.is_increasing());
        let v = f.values();
        let x = g.nodes();
        for i in 16..2032 {
            // centred in u = ln theta, then d theta / du = theta
            let dfdu = (v[i + 1] - v[i - 1]) / (x[i + 1].ln() - x[i - 1].ln());
            let fd = dfdu / x[i];
            assert!((fd - f.slopes()[i]).abs() < 1e-5 * f.slopes()[i].abs(), "node {i}");
        }
    }

    #[test]
    fn tabulated_inverse_and_clamp() {
        let g = Grid1D::linear(0.0, 2.0, 129).unwrap();
        let values: Vec<f64> = g.nodes().iter().map(|t| 1.0 + t * t).collect();
        let prior = PriorDensity::custom(&g, values).unwrap();
        let f = symmetry_from_prior(&prior, 3.0, -1.0).unwrap();
        for &t in &[0.05, 0.7, 1.3, 1.99] {
            assert!((f.inverse(f.value(t)).x - t).abs() < 1e-12);
        }
        let (lo, hi) = f.range();
        assert_eq!(f.inverse(hi + 1.0), Inversion { x: 2.0, clamped: true });
        assert_eq!(f.inverse(lo - 1.0), Inversion { x: 0.0, clamped: true });
    }

    #[test]
    fn rejects_flat_spots() {
        let g = Grid1D::linear(0.0, 1.0, 33).unwrap();
        let mut values = vec![1.0; 33];
        values[10] = 0.0;
        let prior = PriorDensity::custom(&g, values).unwrap();
        assert!(matches!(symmetry_from_prior(&prior, 1.0, 0.0), Err(Error::InvalidSymmetry(_))));
        let flat = PriorDensity::custom(&g, vec![1.0; 33]).unwrap();
        assert!(symmetry_from_prior(&flat, 0.0, 0.0).is_err());
    }
}
