//! Acceptance checks AC1 to AC11.

use std::time::Instant;

use serde::Serialize;

use qsense_core::bayes::{optimal_estimate, PosteriorState};
use qsense_core::models::{
    rate_closed_form, rate_pipeline, simulate_shots, CoherenceCase, CoherenceModel, ExponentialRateModel, Framework,
    LifetimeCase,
};
use qsense_core::numerics::{digamma, trigamma, Grid1D, RandomStream};
use qsense_core::strategy::{consistency_check, qfi, BornLikelihood, Povm, StrategyReport};
use qsense_core::symmetry::{
    classical_fisher, kl_divergence, make_ignorance_prior, verify_prior_invariance, ParameterTransform, PriorDensity,
    PriorKind, SymmetryFunction, TransformFamily,
};

use crate::config::{Case, ExperimentConfig, FrameworkChoice};
use crate::runner::{run_single, FrameworkSummary};

pub const AC1_VALUE_TOL: f64 = 1e-12;
pub const AC1_RECURRENCE_TOL: f64 = 1e-11;
pub const AC2_REL_TOL: f64 = 1e-3;
pub const AC3_REL_TOL: f64 = 0.01;
pub const AC4_REL_TOL: f64 = 1e-5;
pub const AC5_OFF_DIAGONAL_TOL: f64 = 1e-8;
pub const AC5_IDENTITY_TOL: f64 = 1e-8;
pub const AC6_EQUIVALENCE_TOL: f64 = 1e-3;
pub const AC7_NSR_BAND: (f64, f64) = (0.1, 1.0);
pub const AC7_RATIO_BAND: (f64, f64) = (0.5, 2.0);
pub const AC7_FEW_SHOT_RATIO: f64 = 3.0;
pub const AC8_LOSS_FULL: f64 = 0.99;
pub const AC8_LOSS_HALF: f64 = 1.52;
pub const AC8_LOSS_TOL: f64 = 0.02;
pub const AC8_COMPONENTS: (f64, f64) = (0.44, 0.90);
pub const AC8_COMPONENT_TOL: f64 = 0.01;
pub const AC9_NSR_BAND: (f64, f64) = (0.15, 0.7);
pub const AC9_RATIO_BAND: (f64, f64) = (0.5, 2.0);
pub const AC11_INVARIANCE_TOL: f64 = 1e-9;
pub const AC11_KL_REL_TOL: f64 = 0.01;
pub const AC11_POVM_TOL: f64 = 1e-10;

/// Repetitions for the stochastic NSR criteria.
pub const NSR_REPETITIONS: usize = 200;
pub const COHERENCE_WIDTH: f64 = 1.0 - 1e-5;
pub const LIFETIME_WIDTH: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    /// One-line report, `PASS AC4 ...` or `FAIL AC4 ...`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {}: {} [{:.2} s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

type Outcome = qsense_core::Result<(bool, String)>;

fn timed(id: &'static str, title: &'static str, body: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { id, title, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn within(x: f64, band: (f64, f64)) -> bool {
    x >= band.0 && x <= band.1
}

pub fn ac1() -> Check {
    timed("AC1", "polygamma values and recurrence", || {
        let d1 = digamma(1.0)? + 0.577_215_664_901_532_9;
        let t1 = trigamma(1.0)? - std::f64::consts::PI.powi(2) / 6.0;
        let mut rng = RandomStream::new(1, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = 100.0 * (1.0 - rng.uniform());
            let r = (digamma(x + 1.0)? - digamma(x)? - 1.0 / x).abs() / (1.0 / x).max(1.0);
            worst = worst.max(r);
        }
        let ok = d1.abs() < AC1_VALUE_TOL && t1.abs() < AC1_VALUE_TOL && worst < AC1_RECURRENCE_TOL;
        Ok((ok, format!("digamma(1) err {:.1e}, trigamma(1) err {:.1e}, recurrence err {worst:.1e}", d1.abs(), t1.abs())))
    })
}

pub fn ac2() -> Check {
    timed("AC2", "rate grid pipeline vs closed form", || {
        let mut worst: f64 = 0.0;
        for mu in [1usize, 5, 20] {
            for seed in 0..50u64 {
                let mut rng = RandomStream::new(seed, mu as u64);
                let batch = simulate_shots(&ExponentialRateModel, 1.0, mu, &[0.0], &mut rng)?;
                let grid = rate_pipeline(&batch.outcomes, 1.0, qsense_core::models::RATE_GRID_NODES)?;
                let exact = rate_closed_form(batch.mean()?, mu, 1.0)?;
                worst = worst
                    .max((grid.estimate / exact.estimate - 1.0).abs())
                    .max((grid.error / exact.error - 1.0).abs());
            }
        }
        Ok((worst < AC2_REL_TOL, format!("max relative difference {worst:.2e} < {AC2_REL_TOL:e}")))
    })
}

pub fn ac3() -> Check {
    timed("AC3", "rate asymptotics", || {
        let mut rng = RandomStream::new(0, 0);
        let batch = simulate_shots(&ExponentialRateModel, 1.0, 2000, &[0.0], &mut rng)?;
        let t_bar = batch.mean()?;
        let r = rate_pipeline(&batch.outcomes, 1.0, qsense_core::models::RATE_GRID_NODES)?;
        let dev = (r.estimate * t_bar - 1.0).abs();
        Ok((dev < AC3_REL_TOL, format!("|estimate * t_bar - 1| = {dev:.2e} < {AC3_REL_TOL}")))
    })
}

pub fn ac4() -> Check {
    timed("AC4", "coherence quantum Fisher information", || {
        let m = CoherenceModel::default();
        let mut worst: f64 = 0.0;
        for theta in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let q = qfi(&m, theta, 0.0)?.value;
            worst = worst.max((q / (0.81 / (theta * (1.0 - theta))) - 1.0).abs());
        }
        Ok((worst < AC4_REL_TOL, format!("max relative error {worst:.1e} < {AC4_REL_TOL:e}")))
    })
}

pub fn ac5() -> Check {
    timed("AC5", "coherence optimal POVM is the computational basis", || {
        let case = CoherenceCase::new(CoherenceModel::default(), COHERENCE_WIDTH, qsense_core::models::CASE_NODES)?;
        let mut off: f64 = 0.0;
        let mut identity: f64 = 0.0;
        for fw in Framework::BOTH {
            let r = case.strategy(fw)?;
            off = r.povm.elements().iter().map(|p| p.max_off_diagonal()).fold(off, f64::max);
            identity = identity.max(consistency_check(&r, &r.rho0, &r.rho1));
        }
        let ok = off < AC5_OFF_DIAGONAL_TOL && identity < AC5_IDENTITY_TOL;
        Ok((ok, format!("max off-diagonal {off:.1e}, identity residual {identity:.1e}")))
    })
}

pub fn ac6() -> Check {
    timed("AC6", "intrinsic gain vs coherence prior width", || {
        let model = CoherenceModel::default();
        let eps = |a: f64| -> qsense_core::Result<(f64, f64)> {
            let case = CoherenceCase::new(model, a, qsense_core::models::CASE_NODES)?;
            Ok((case.strategy(Framework::Transformation)?.intrinsic_gain, case.strategy(Framework::Geometry)?.intrinsic_gain))
        };
        let points = [0.55, 0.65, 0.75, 0.85, 0.95].map(eps);
        let points = points.into_iter().collect::<qsense_core::Result<Vec<_>>>()?;
        let inc_t = points.windows(2).all(|w| w[1].0 > w[0].0);
        let inc_g = points.windows(2).all(|w| w[1].1 > w[0].1);
        let dominates = points.iter().all(|(t, g)| t >= g);
        let (t, g) = eps(0.501)?;
        let gap = (t - g).abs();
        let ok = inc_t && inc_g && dominates && gap < AC6_EQUIVALENCE_TOL;
        let list: Vec<String> = points.iter().map(|(t, g)| format!("{t:.4}/{g:.4}")).collect();
        Ok((
            ok,
            format!(
                "eps T/G [{}], increasing T {inc_t} G {inc_g}, T >= G {dominates}, |gap| at a=0.501 {gap:.1e}",
                list.join(", ")
            ),
        ))
    })
}

fn nsr_run(case: Case, true_parameter: f64, width: f64, shots: usize) -> qsense_core::Result<Vec<FrameworkSummary>> {
    let config = ExperimentConfig {
        case,
        framework: FrameworkChoice::Both,
        prior_width: Some(width),
        true_parameter,
        shots,
        repetitions: NSR_REPETITIONS,
        seed: 0,
        grid_nodes: None,
        lambda: qsense_core::models::DEFAULT_LAMBDA,
        probe_time: 1.0,
        trajectory: false,
        plots: false,
        output_dir: None,
        sweep: None,
    };
    match run_single(&config) {
        Ok(out) => Ok(out.summary.frameworks),
        Err(crate::runner::RunError::Numerical(e)) => Err(e),
        Err(e) => Err(qsense_core::Error::Domain(e.to_string())),
    }
}

fn pair(s: &[FrameworkSummary]) -> (f64, f64) {
    let get = |f: Framework| s.iter().find(|x| x.framework == f.name()).map_or(f64::NAN, |x| x.nsr);
    (get(Framework::Transformation), get(Framework::Geometry))
}

pub fn ac7() -> Check {
    timed("AC7", "coherence NSR statistics", || {
        let (t, g) = pair(&nsr_run(Case::Coherence, 0.8, COHERENCE_WIDTH, 120)?);
        let (t20, g20) = pair(&nsr_run(Case::Coherence, 0.8, COHERENCE_WIDTH, 20)?);
        let bands = within(t, AC7_NSR_BAND) && within(g, AC7_NSR_BAND);
        let ratio = within(t / g, AC7_RATIO_BAND);
        let few = t20 / g20 >= AC7_FEW_SHOT_RATIO;
        Ok((
            bands && ratio && few,
            format!(
                "mu=120 NSR T {t:.4} G {g:.4} in {AC7_NSR_BAND:?}: {bands}; ratio {:.3} in {AC7_RATIO_BAND:?}: {ratio}; \
                 mu=20 ratio {:.3} >= {AC7_FEW_SHOT_RATIO}: {few}",
                t / g,
                t20 / g20
            ),
        ))
    })
}

/// Components `(|<g|psi>|, |<e|psi>|)` of the projector with the larger excited weight.
pub fn projector_components(r: &StrategyReport) -> (f64, f64) {
    r.povm
        .elements()
        .iter()
        .map(|p| (p.get(0, 0).re.max(0.0).sqrt(), p.get(1, 1).re.max(0.0).sqrt()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((f64::NAN, f64::NAN))
}

pub fn ac8() -> Check {
    timed("AC8", "lifetime minimum losses and probe projector", || {
        let case = LifetimeCase::new(LIFETIME_WIDTH, 1.0, qsense_core::models::CASE_NODES)?;
        let full = case.strategy(Framework::Transformation, 1.0)?;
        let half = case.strategy(Framework::Transformation, 0.5)?;
        let (g, e) = projector_components(&half);
        let ok_full = (full.min_loss - AC8_LOSS_FULL).abs() <= AC8_LOSS_TOL;
        let ok_half = (half.min_loss - AC8_LOSS_HALF).abs() <= AC8_LOSS_TOL;
        let ok_vec = (g - AC8_COMPONENTS.0).abs() <= AC8_COMPONENT_TOL && (e - AC8_COMPONENTS.1).abs() <= AC8_COMPONENT_TOL;
        Ok((
            ok_full && ok_half && ok_vec,
            format!(
                "min_loss(eta=1) {:.4} vs {AC8_LOSS_FULL}: {ok_full}; min_loss(eta=1/2) {:.4} vs {AC8_LOSS_HALF}: {ok_half}; \
                 components ({g:.3}, {e:.3}) vs {AC8_COMPONENTS:?}: {ok_vec}",
                full.min_loss, half.min_loss
            ),
        ))
    })
}

pub fn ac9() -> Check {
    timed("AC9", "lifetime NSR statistics", || {
        let (t, g) = pair(&nsr_run(Case::Lifetime, 1.0, LIFETIME_WIDTH, 200)?);
        let (t20, g20) = pair(&nsr_run(Case::Lifetime, 0.26, LIFETIME_WIDTH, 20)?);
        let bands = within(t, AC9_NSR_BAND) && within(g, AC9_NSR_BAND);
        let ratio = within(t / g, AC9_RATIO_BAND);
        let few = t20 >= g20;
        Ok((
            bands && ratio && few,
            format!(
                "mu=200 NSR T {t:.4} G {g:.4} in {AC9_NSR_BAND:?}: {bands}; ratio {:.3} in {AC9_RATIO_BAND:?}: {ratio}; \
                 mu=20 NSR T {t20:.4} >= G {g20:.4}: {few}",
                t / g
            ),
        ))
    })
}

pub fn ac10() -> Check {
    timed("AC10", "optimal lifetime probe", || {
        let etas: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
        let mut stars = Vec::new();
        for b in [2.0, 10.0, 100.0] {
            stars.push(LifetimeCase::new(b, 1.0, qsense_core::models::CASE_NODES)?.probe_curve(&etas)?.eta_star);
        }
        Ok((stars.iter().all(|&s| s == 1.0), format!("eta* for b = 2, 10, 100: {stars:?}")))
    })
}

fn expected_loss(post: &PosteriorState, f: &SymmetryFunction, estimate: f64) -> qsense_core::Result<f64> {
    let fe = f.value(estimate);
    post.expectation(&f.values().iter().map(|v| (v - fe).powi(2)).collect::<Vec<_>>())
}

pub fn ac11() -> Check {
    timed("AC11", "property suite", || {
        let mut rng = RandomStream::new(11, 0);

        let scale_grid = Grid1D::logarithmic(0.01, 100.0, 512)?;
        let scale = make_ignorance_prior(PriorKind::JeffreysScale, &scale_grid)?;
        let weight_grid = Grid1D::logit(1e-3, 1.0 - 1e-3, 512)?;
        let weight = make_ignorance_prior(PriorKind::Weight, &weight_grid)?;
        let mut invariance: f64 = 0.0;
        for gamma in [0.2, 0.5, 2.0, 5.0] {
            invariance = invariance
                .max(verify_prior_invariance(&scale, &ParameterTransform::new(TransformFamily::Scale, gamma)?)?)
                .max(verify_prior_invariance(&weight, &ParameterTransform::new(TransformFamily::Mobius, gamma)?)?);
        }
        let ok_inv = invariance < AC11_INVARIANCE_TOL;

        let m = CoherenceModel::default();
        let povm = Povm::computational_basis(2);
        let born = BornLikelihood::new(&m, &povm)?;
        let mut ok_qfi = true;
        for k in 0..20 {
            let theta = 0.03 + 0.94 * k as f64 / 19.0;
            let q = qfi(&m, theta, 0.0)?.value;
            ok_qfi &= q + 1e-6 >= classical_fisher(&born, theta, 0.0).value;
        }

        let mut povm_defect: f64 = 0.0;
        let mut strategies = 0;
        for a in [0.55, 0.75, 0.95, COHERENCE_WIDTH] {
            let case = CoherenceCase::new(m, a, 256)?;
            for fw in Framework::BOTH {
                let (c, e) = case.strategy(fw)?.povm.defects();
                povm_defect = povm_defect.max(c).max(-e);
                strategies += 1;
            }
        }
        for b in [2.0, 10.0, 100.0] {
            let case = LifetimeCase::new(b, 1.0, 256)?;
            for eta in [0.25, 0.5, 1.0] {
                let (c, e) = case.strategy(Framework::Transformation, eta)?.povm.defects();
                povm_defect = povm_defect.max(c).max(-e);
                strategies += 1;
            }
        }
        let ok_povm = povm_defect < AC11_POVM_TOL;

        let g = Grid1D::logit(0.05, 0.95, 64)?;
        let f = SymmetryFunction::hyperbolic(&g)?;
        let mut violations = 0;
        for _ in 0..200 {
            let w: Vec<f64> = (0..g.len()).map(|_| rng.uniform()).collect();
            let post = PosteriorState::from_prior(&PriorDensity::custom(&g, w)?);
            let r = optimal_estimate(&post, &f)?;
            let best = expected_loss(&post, &f, r.estimate)?;
            for _ in 0..20 {
                let shifted = (r.estimate + 0.2 * (rng.uniform() - 0.5)).clamp(0.05, 0.95);
                if shifted != r.estimate && expected_loss(&post, &f, shifted)? < best {
                    violations += 1;
                }
            }
        }
        let ok_opt = violations == 0;

        let mut kl_worst: f64 = 0.0;
        for k in 0..10 {
            let theta = 0.05 + 0.9 * k as f64 / 9.0;
            let d = 1e-3 * theta;
            let kl = kl_divergence(&m, theta, theta + d, 0.0)?;
            let half = 0.5 * classical_fisher(&m, theta, 0.0).value * d * d;
            kl_worst = kl_worst.max((kl / half - 1.0).abs());
        }
        let ok_kl = kl_worst < AC11_KL_REL_TOL;

        Ok((
            ok_inv && ok_qfi && ok_povm && ok_opt && ok_kl,
            format!(
                "invariance {invariance:.1e}; QFI >= CF {ok_qfi}; POVM defect {povm_defect:.1e} over {strategies}; \
                 dominance violations {violations}/4000; KL rel err {kl_worst:.1e}"
            ),
        ))
    })
}

pub type CheckFn = fn() -> Check;

pub const CHECKS: [CheckFn; 11] = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11];

pub fn run_all() -> Vec<Check> {
    CHECKS.iter().map(|c| c()).collect()
}
