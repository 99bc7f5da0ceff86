//! Parameter transformations and invariance checks of ignorance priors.

use crate::error::{Error, Result};
use crate::symmetry::prior::PriorDensity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformFamily {
    /// `theta -> gamma theta`.
    Scale,
    /// `theta -> theta + gamma`.
    Translation,
    /// `theta -> gamma theta / (1 - theta + gamma theta)`, maps (0, 1) onto itself.
    Mobius,
}

/// One member `tau_gamma` of a transformation family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterTransform {
    family: TransformFamily,
    gamma: f64,
}

impl ParameterTransform {
    pub fn new(family: TransformFamily, gamma: f64) -> Result<Self> {
        let ok = match family {
            TransformFamily::Scale | TransformFamily::Mobius => gamma > 0.0 && gamma.is_finite(),
            TransformFamily::Translation => gamma.is_finite(),
        };
        if !ok {
            return Err(Error::Domain(format!("invalid gamma = {gamma} for {family:?}")));
        }
        Ok(Self { family, gamma })
    }

    pub fn family(&self) -> TransformFamily {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn apply(&self, theta: f64) -> f64 {
        let g = self.gamma;
        match self.family {
            TransformFamily::Scale => g * theta,
            TransformFamily::Translation => theta + g,
            TransformFamily::Mobius => g * theta / (1.0 - theta + g * theta),
        }
    }

    /// `d tau / d theta`.
    pub fn derivative(&self, theta: f64) -> f64 {
        let g = self.gamma;
        match self.family {
            TransformFamily::Scale => g,
            TransformFamily::Translation => 1.0,
            TransformFamily::Mobius => g / (1.0 - theta + g * theta).powi(2),
        }
    }
}

/// Largest violation of `p(tau(theta)) |tau'(theta)| = p(theta)` over grid
/// nodes whose image stays in range, relative to the largest density there.
///
/// Closed-form priors are compared through their unnormalized forms, so the
/// check is independent of where the range was truncated.
pub fn verify_prior_invariance(prior: &PriorDensity, transform: &ParameterTransform) -> Result<f64> {
    let grid = prior.grid();
    let kind = prior.kind();
    let density = |theta: f64| match kind.unnormalized(theta) {
        Some(v) => v,
        None => prior.density_at(theta),
    };
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut overlap = 0usize;
    for &theta in grid.nodes() {
        let image = transform.apply(theta);
        if !grid.contains(image) {
            continue;
        }
        overlap += 1;
        let p = density(theta);
        let pulled = density(image) * transform.derivative(theta).abs();
        worst = worst.max((pulled - p).abs());
        scale = scale.max(p.abs());
    }
    if overlap == 0 {
        return Err(Error::Empty("transformed range does not overlap the grid"));
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid1D;
    use crate::symmetry::prior::{make_ignorance_prior, PriorKind};

    #[test]
    fn jeffreys_is_scale_invariant() {
        let g = Grid1D::logarithmic(0.01, 100.0, 512).unwrap();
        let p = make_ignorance_prior(PriorKind::JeffreysScale, &g).unwrap();
        let t = ParameterTransform::new(TransformFamily::Scale, 3.0).unwrap();
        assert!(verify_prior_invariance(&p, &t).unwrap() < 1e-9);
    }

    #[test]
    fn weight_is_mobius_invariant() {
        let g = Grid1D::logit(0.05, 0.95, 512).unwrap();
        let p = make_ignorance_prior(PriorKind::Weight, &g).unwrap();
        let t = ParameterTransform::new(TransformFamily::Mobius, 2.0).unwrap();
        assert!(verify_prior_invariance(&p, &t).unwrap() < 1e-9);
    }

    #[test]
    fn flat_is_not_scale_invariant() {
        let g = Grid1D::linear(0.1, 10.0, 512).unwrap();
        let p = make_ignorance_prior(PriorKind::Flat, &g).unwrap();
        let t = ParameterTransform::new(TransformFamily::Scale, 2.0).unwrap();
        assert!(verify_prior_invariance(&p, &t).unwrap() > 0.5);
        let t = ParameterTransform::new(TransformFamily::Translation, 0.5).unwrap();
        assert!(verify_prior_invariance(&p, &t).unwrap() < 1e-12);
    }

    #[test]
    fn mobius_maps_unit_interval() {
        let t = ParameterTransform::new(TransformFamily::Mobius, 0.3).unwrap();
        for x in [1e-9, 0.2, 0.5, 0.9, 1.0 - 1e-9] {
            let y = t.apply(x);
            assert!(y > 0.0 && y < 1.0);
        }
        assert!(ParameterTransform::new(TransformFamily::Scale, -1.0).is_err());
    }

    #[test]
    fn empty_overlap_rejected() {
        let g = Grid1D::logarithmic(1.0, 2.0, 32).unwrap();
        let p = make_ignorance_prior(PriorKind::JeffreysScale, &g).unwrap();
        let t = ParameterTransform::new(TransformFamily::Scale, 10.0).unwrap();
        assert!(verify_prior_invariance(&p, &t).is_err());
    }
}
