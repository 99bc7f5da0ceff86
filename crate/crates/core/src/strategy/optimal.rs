//! Optimal single-shot measurement and estimator for a prior and symmetry function.

use crate::error::{Error, Result};
use crate::numerics::{eigh, HermitianOperator};
use crate::strategy::lyapunov::solve_lyapunov;
use crate::strategy::model::{Povm, QuantumModel};
use crate::symmetry::{PriorDensity, SymmetryFunction};

/// Eigenvalues of `S` closer than this share one projector.
pub const EIGENVALUE_MERGE: f64 = 1e-9;

/// `rho_k = int p(theta) f(theta)^k rho_y(theta) d theta` for `k = 0, 1, 2`.
pub fn state_moment<M: QuantumModel + ?Sized>(
    model: &M,
    prior: &PriorDensity,
    f: &SymmetryFunction,
    k: u32,
    control: f64,
) -> Result<HermitianOperator> {
    if k > 2 {
        return Err(Error::Domain(format!("state moments are defined for k <= 2, got {k}")));
    }
    Ok(state_moments(model, prior, f, control)?.swap_remove(k as usize))
}

/// All three moments in one pass over the grid.
pub fn state_moments<M: QuantumModel + ?Sized>(
    model: &M,
    prior: &PriorDensity,
    f: &SymmetryFunction,
    control: f64,
) -> Result<Vec<HermitianOperator>> {
    prior.same_grid(f.grid())?;
    let dim = model.dim();
    let mut moments = vec![HermitianOperator::zeros(dim); 3];
    let grid = prior.grid();
    for (((&theta, w), p), fv) in grid.nodes().iter().zip(grid.weights()).zip(prior.density()).zip(f.values()) {
        let mass = w * p;
        if mass == 0.0 {
            continue;
        }
        let rho = model.state(theta, control)?;
        moments[0].add_scaled(mass, &rho);
        moments[1].add_scaled(mass * fv, &rho);
        moments[2].add_scaled(mass * fv * fv, &rho);
    }
    Ok(moments)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyReport {
    /// Solution of `S rho0 + rho0 S = 2 rho1`.
    pub s_operator: HermitianOperator,
    /// Spectral projectors of `S`, labelled by eigenvalue (units of `f`).
    pub povm: Povm,
    /// `f^{-1}` of each label.
    pub estimates: Vec<f64>,
    /// Labels outside the range of `f`, whose estimates were clamped.
    pub out_of_range: Vec<bool>,
    /// `Tr(rho0 S^2)`.
    pub gain: f64,
    /// `int p f^2 - gain`.
    pub min_loss: f64,
    /// `(gain - Tr(rho0 S)^2) / prior variance of f`.
    pub intrinsic_gain: f64,
    pub prior_f_mean: f64,
    pub prior_f_variance: f64,
    pub rho0: HermitianOperator,
    pub rho1: HermitianOperator,
}

/// Projects onto the eigenspaces of the Lyapunov solution.
pub fn optimal_strategy<M: QuantumModel + ?Sized>(
    model: &M,
    prior: &PriorDensity,
    f: &SymmetryFunction,
    control: f64,
) -> Result<StrategyReport> {
    let mut moments = state_moments(model, prior, f, control)?;
    let rho1 = moments.swap_remove(1);
    let rho0 = moments.swap_remove(0);
    let s = solve_lyapunov(&rho0, &rho1)?;

    let eig = eigh(&s);
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for cluster in eig.clusters(EIGENVALUE_MERGE) {
        let mut p = HermitianOperator::zeros(s.dim());
        for k in cluster.clone() {
            p.add_scaled(1.0, &HermitianOperator::projector(&eig.vector(k)));
        }
        labels.push(cluster.clone().map(|k| eig.values[k]).sum::<f64>() / cluster.len() as f64);
        elements.push(p);
    }
    let povm = Povm::new(elements, labels)?;
    let inversions: Vec<_> = povm.labels().iter().map(|&l| f.inverse(l)).collect();

    let prior_f_mean = prior.expectation(f.values())?;
    let f2: Vec<f64> = f.values().iter().map(|v| v * v).collect();
    let prior_f2 = prior.expectation(&f2)?;
    let centred: Vec<f64> = f.values().iter().map(|v| (v - prior_f_mean).powi(2)).collect();
    let prior_f_variance = prior.expectation(&centred)?;

    let gain = rho0.trace_product(&s.sandwich(&HermitianOperator::identity(s.dim())));
    let s_mean = rho0.trace_product(&s);
    let intrinsic_gain = if prior_f_variance > 0.0 {
        ((gain - s_mean * s_mean) / prior_f_variance).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(StrategyReport {
        estimates: inversions.iter().map(|i| i.x).collect(),
        out_of_range: inversions.iter().map(|i| i.clamped).collect(),
        s_operator: s,
        povm,
        gain,
        min_loss: prior_f2 - gain,
        intrinsic_gain,
        prior_f_mean,
        prior_f_variance,
        rho0,
        rho1,
    })
}

/// Threshold below which an outcome is never observed and is skipped.
pub const NEGLIGIBLE_OUTCOME: f64 = 1e-14;

/// `max_k |s_k - Tr(P_k rho1) / Tr(P_k rho0)|` over observable outcomes.
pub fn consistency_check(report: &StrategyReport, rho0: &HermitianOperator, rho1: &HermitianOperator) -> f64 {
    report
        .povm
        .elements()
        .iter()
        .zip(report.povm.labels())
        .filter_map(|(p, &s)| {
            let w = p.trace_product(rho0);
            (w >= NEGLIGIBLE_OUTCOME).then(|| (s - p.trace_product(rho1) / w).abs())
        })
        .fold(0.0, f64::max)
}
