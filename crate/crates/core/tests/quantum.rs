use qsense_core::bayes::{optimal_estimate, PosteriorState};
use qsense_core::models::{
    lifetime_qfi, simulate_shots, CoherenceCase, CoherenceModel, Framework, LifetimeCase, LifetimeModel,
};
use qsense_core::numerics::{CMatrix, Grid1D, HermitianOperator, RandomStream};
use qsense_core::strategy::{
    adaptive_loop, consistency_check, lyapunov_residual, optimal_strategy, qfi, sld, solve_lyapunov, state_moment,
    BornLikelihood, Povm, QuantumModel,
};
use qsense_core::symmetry::{classical_fisher, make_ignorance_prior, PriorDensity, PriorKind, SymmetryFunction};
use qsense_core::{Error, Result};

/// Three-level family with a random `theta`-dependent rotation.
struct Qutrit {
    base: Vec<f64>,
    generator: HermitianOperator,
}

impl Qutrit {
    fn new(rng: &mut RandomStream) -> Self {
        let mut g = CMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..=i {
                let z = num_complex::Complex64::new(rng.uniform() - 0.5, if i == j { 0.0 } else { rng.uniform() - 0.5 });
                g[(i, j)] = z;
                g[(j, i)] = z.conj();
            }
        }
        let w: Vec<f64> = (0..3).map(|_| 0.1 + rng.uniform()).collect();
        let s: f64 = w.iter().sum();
        Self { base: w.iter().map(|x| x / s).collect(), generator: HermitianOperator::new(g).unwrap() }
    }
}

impl QuantumModel for Qutrit {
    fn dim(&self) -> usize {
        3
    }

    fn state(&self, theta: f64, _: f64) -> Result<HermitianOperator> {
        let e = qsense_core::numerics::eigh(&self.generator);
        let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            e.values.iter().map(|&v| num_complex::Complex64::from_polar(1.0, -theta * v)),
        ));
        let u = &e.vectors * phases * e.vectors.adjoint();
        let rho = &u * HermitianOperator::diagonal(&self.base).matrix() * u.adjoint();
        HermitianOperator::new((&rho + rho.adjoint()).scale(0.5))
    }
}

#[test]
fn lyapunov_closed_cases() {
    let rho1 = HermitianOperator::from_real_rows(&[vec![0.3, 0.1], vec![0.1, -0.2]]).unwrap();
    let s = solve_lyapunov(&HermitianOperator::diagonal(&[0.5, 0.5]), &rho1).unwrap();
    assert!((&s - &rho1.scale(2.0)).frobenius_norm() < 1e-14);

    let d1 = HermitianOperator::diagonal(&[0.12, 0.3]);
    let s = solve_lyapunov(&HermitianOperator::diagonal(&[0.3, 0.7]), &d1).unwrap();
    assert!((s.get(0, 0).re - 0.4).abs() < 1e-14 && (s.get(1, 1).re - 0.3 / 0.7).abs() < 1e-14);

    let pure = HermitianOperator::diagonal(&[1.0, 0.0]);
    let bad = HermitianOperator::diagonal(&[0.0, 1.0]);
    assert!(matches!(solve_lyapunov(&pure, &bad), Err(Error::InconsistentLyapunov { .. })));
}

#[test]
fn sld_examples() {
    let (p, dp) = (0.3, 0.8);
    let l = sld(&HermitianOperator::diagonal(&[p, 1.0 - p]), &HermitianOperator::diagonal(&[dp, -dp])).unwrap();
    assert!((l.get(0, 0).re - dp / p).abs() < 1e-13 && (l.get(1, 1).re + dp / (1.0 - p)).abs() < 1e-13);

    let m = CoherenceModel::default();
    let (rho, drho) = (m.state(0.3, 0.0).unwrap(), m.dstate(0.3, 0.0).unwrap());
    let l = sld(&rho, &drho).unwrap();
    assert!((&l.anticommutator(&rho).scale(0.5) - &drho).frobenius_norm() < 1e-9);
}

#[test]
fn state_moment_converges_under_refinement() {
    let m = CoherenceModel::default();
    let moment = |n| {
        let g = Grid1D::logit(0.05, 0.95, n).unwrap();
        let p = make_ignorance_prior(PriorKind::Weight, &g).unwrap();
        let f = SymmetryFunction::hyperbolic(&g).unwrap();
        (0..3).map(|k| state_moment(&m, &p, &f, k, 0.0).unwrap()).collect::<Vec<_>>()
    };
    let (coarse, fine) = (moment(256), moment(2560));
    assert!((coarse[0].trace() - 1.0).abs() < 1e-9);
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).frobenius_norm() < 1e-6);
    }
}

#[test]
fn coherence_strategies() {
    let case = CoherenceCase::new(CoherenceModel::default(), 0.95, 1024).unwrap();
    for fw in Framework::BOTH {
        let r = case.strategy(fw).unwrap();
        assert!(lyapunov_residual(&r.s_operator, &r.rho0, &r.rho1) < 1e-9);
        assert!(r.povm.elements().iter().all(|p| p.max_off_diagonal() < 1e-8));
        assert!(consistency_check(&r, &r.rho0, &r.rho1) < 1e-8);
        let setup = case.setup(fw).unwrap();
        let f2 = setup.prior.expectation(&setup.f.values().iter().map(|v| v * v).collect::<Vec<_>>()).unwrap();
        assert!((r.min_loss - (f2 - r.gain)).abs() < 1e-9);
        assert!(r.min_loss >= 0.0 && r.min_loss <= r.prior_f_variance + 1e-12);
        assert!((0.0..=1.0).contains(&r.intrinsic_gain));
    }
}

#[test]
fn gain_equals_outcome_average() {
    let case = CoherenceCase::new(CoherenceModel::default(), 0.9, 1024).unwrap();
    for fw in Framework::BOTH {
        let r = case.strategy(fw).unwrap();
        let probs = r.povm.probabilities(&r.rho0);
        let avg: f64 = probs.iter().zip(r.povm.labels()).map(|(p, s)| p * s * s).sum();
        assert!((avg - r.gain).abs() < 1e-8);
    }
}

#[test]
fn random_qutrit_consistency() {
    let mut rng = RandomStream::new(21, 0);
    let model = Qutrit::new(&mut rng);
    let g = Grid1D::linear(0.0, 2.0, 257).unwrap();
    let weights: Vec<f64> = (0..g.len()).map(|_| 0.2 + rng.uniform()).collect();
    let prior = PriorDensity::custom(&g, weights).unwrap();
    let r = optimal_strategy(&model, &prior, &SymmetryFunction::identity(&g).unwrap(), 0.0).unwrap();
    assert!(consistency_check(&r, &r.rho0, &r.rho1) < 1e-8);
    let (complete, min_eig) = r.povm.defects();
    assert!(complete < 1e-10 && min_eig > -1e-10);
}

#[test]
fn lifetime_strategies() {
    let case = LifetimeCase::new(10.0, 1.0, 1024).unwrap();
    let r = case.strategy(Framework::Transformation, 1.0).unwrap();
    assert!(r.povm.elements().iter().all(|p| p.max_off_diagonal() < 1e-10));
    assert!((r.min_loss - 0.99).abs() < 0.02);
    let opt = case.probe_curve(&[0.25, 0.5, 0.75, 1.0]).unwrap();
    assert_eq!(opt.eta_star, 1.0);
}

#[test]
fn half_probe_against_brute_force() {
    // two-outcome projective measurements parametrized by an angle
    let case = LifetimeCase::new(10.0, 1.0, 1024).unwrap();
    let model = LifetimeModel::new(0.5, 1.0).unwrap();
    let r = case.strategy(Framework::Transformation, 0.5).unwrap();
    let setup = case.setup(Framework::Transformation).unwrap();
    let f2 = setup.prior.expectation(&setup.f.values().iter().map(|v| v * v).collect::<Vec<_>>()).unwrap();
    let mut best = f64::INFINITY;
    for k in 0..=2000 {
        let phi = std::f64::consts::PI * k as f64 / 2000.0;
        let (c, s) = (phi.cos(), phi.sin());
        let p0 = HermitianOperator::from_real_rows(&[vec![c * c, c * s], vec![c * s, s * s]]).unwrap();
        let p1 = &HermitianOperator::identity(2) - &p0;
        let gain: f64 = [p0, p1]
            .iter()
            .map(|p| {
                let w = p.trace_product(&r.rho0);
                if w > 0.0 {
                    p.trace_product(&r.rho1).powi(2) / w
                } else {
                    0.0
                }
            })
            .sum();
        best = best.min(f2 - gain);
    }
    assert!((r.min_loss - best).abs() < 1e-6);
    assert!((r.min_loss - 1.392_6).abs() < 1e-3);
    assert!(optimal_strategy(&model, &setup.prior, &setup.f, 1.0).unwrap().min_loss > 0.99);
}

#[test]
fn qfi_examples() {
    let m = CoherenceModel::default();
    for theta in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let q = qfi(&m, theta, 0.0).unwrap().value;
        assert!((q / m.qfi_closed_form(theta) - 1.0).abs() < 1e-5);
    }
    for eta in [0.25, 0.5, 0.75, 1.0] {
        let model = LifetimeModel::new(eta, 1.0).unwrap();
        for ratio in [0.3, 1.0, 3.0] {
            let q = qfi(&model, ratio, 1.0).unwrap().value;
            assert!((q / lifetime_qfi(ratio, 1.0, eta).unwrap() - 1.0).abs() < 1e-5, "eta {eta}, theta {ratio}");
        }
    }
}

#[test]
fn qfi_bounds_classical_fisher() {
    let m = CoherenceModel::default();
    let povm = Povm::computational_basis(2);
    let born = BornLikelihood::new(&m, &povm).unwrap();
    for k in 0..20 {
        let theta = 0.03 + 0.94 * k as f64 / 19.0;
        let q = qfi(&m, theta, 0.0).unwrap().value;
        assert!(q + 1e-6 >= classical_fisher(&born, theta, 0.0).value);
        assert!(q + 1e-6 >= classical_fisher(&m, theta, 0.0).value);
    }
}

#[test]
fn single_control_adaptive_matches_fixed_protocol() {
    let case = LifetimeCase::new(10.0, 1.0, 256).unwrap();
    let setup = case.setup(Framework::Transformation).unwrap();
    let model = LifetimeModel::new(1.0, 1.0).unwrap();
    let steps = adaptive_loop(&model, &setup.prior, &setup.f, &[1.0], 1.0, 40, &mut RandomStream::new(4, 0)).unwrap();

    let lik = model.energy_likelihood().unwrap();
    let batch = simulate_shots(&lik, 1.0, 40, &[1.0], &mut RandomStream::new(4, 0)).unwrap();
    let mut post = PosteriorState::from_prior(&setup.prior);
    for (step, &s) in steps.iter().zip(&batch.outcomes) {
        assert_eq!(step.outcome as f64, s);
        post = post.bayes_update(&lik, s, 1.0).unwrap();
        let r = optimal_estimate(&post, &setup.f).unwrap();
        assert!((r.estimate - step.report.estimate).abs() < 1e-9 * r.estimate);
    }
}

#[test]
fn point_prior_adaptive_is_static() {
    let g = Grid1D::logarithmic(0.1, 10.0, 256).unwrap();
    let prior = PriorDensity::point_mass(&g, 1.0).unwrap();
    let theta = g.nodes()[g.nearest_index(1.0)];
    let f = SymmetryFunction::logarithmic(&g, 1.0).unwrap();
    let model = LifetimeModel::new(1.0, 1.0).unwrap();
    let steps = adaptive_loop(&model, &prior, &f, &[0.5, 1.0, 2.0], theta, 10, &mut RandomStream::new(1, 0)).unwrap();
    for s in steps {
        assert!((s.report.estimate - theta).abs() < 1e-12 && s.report.empirical_loss == 0.0);
    }
}

#[test]
fn adaptive_lifetime_coverage() {
    let case = LifetimeCase::new(10.0, 1.0, 256).unwrap();
    let setup = case.setup(Framework::Transformation).unwrap();
    let model = LifetimeModel::new(1.0, 1.0).unwrap();
    let covered = (0..100u64)
        .filter(|&seed| {
            let mut rng = RandomStream::new(seed, 0);
            let steps = adaptive_loop(&model, &setup.prior, &setup.f, &[1.0], 1.0, 200, &mut rng).unwrap();
            let r = steps.last().unwrap().report;
            (r.estimate - 1.0).abs() <= 3.0 * r.error
        })
        .count();
    assert!(covered >= 95, "covered {covered} of 100");
}
