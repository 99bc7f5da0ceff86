//! Lifetime of a decaying two-level atom prepared in
//! `sqrt(1 - eta)|g> + sqrt(eta)|e>` and probed after a time `t`.

use num_complex::Complex64;

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, HermitianOperator};
use crate::strategy::QuantumModel;

/// Lifetime model; the control is the probe time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeModel {
    eta: f64,
    t: f64,
}

fn check(theta: f64, t: f64, eta: f64) -> Result<()> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("lifetime must be positive, got {theta}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("probe time must be positive, got {t}")));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("excited-state weight must lie in [0, 1], got {eta}")));
    }
    Ok(())
}

fn real_matrix(a: f64, b: f64, d: f64) -> HermitianOperator {
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(b, 0.0), Complex64::new(d, 0.0)],
    );
    HermitianOperator::new(m).expect("real symmetric 2x2 is Hermitian")
}

/// `rho_t(theta)` in the basis `(|g>, |e>)` and its `theta` derivative.
pub fn lifetime_state(theta: f64, t: f64, eta: f64) -> Result<(HermitianOperator, HermitianOperator)> {
    check(theta, t, eta)?;
    let decay = (-t / theta).exp();
    let rate = t / (theta * theta);
    let coherence = (eta * (1.0 - eta) * decay).sqrt();
    let rho = real_matrix(1.0 - eta * decay, coherence, eta * decay);
    // d decay / d theta = decay t / theta^2
    let d_pop = eta * decay * rate;
    let drho = real_matrix(-d_pop, 0.5 * coherence * rate, d_pop);
    Ok((rho, drho))
}

/// Energy-basis likelihood for an atom prepared in `|e>`:
/// `p(1) = exp(-t / theta)` (still excited), `p(0) = 1 - exp(-t / theta)`.
pub fn lifetime_likelihood(s: u8, theta: f64, t: f64) -> Result<f64> {
    check(theta, t, 1.0)?;
    let excited = (-t / theta).exp();
    match s {
        0 => Ok(-(-t / theta).exp_m1()),
        1 => Ok(excited),
        _ => Err(Error::Domain(format!("outcome must be 0 or 1, got {s}"))),
    }
}

/// Quantum Fisher information of `rho_t(theta)` in closed form.
pub fn lifetime_qfi(theta: f64, t: f64, eta: f64) -> Result<f64> {
    check(theta, t, eta)?;
    let decay = (-t / theta).exp();
    Ok(eta * t * t * decay * (1.0 + (eta - 1.0) * decay) / (theta.powi(4) * -(-t / theta).exp_m1()))
}

impl LifetimeModel {
    pub fn new(eta: f64, t: f64) -> Result<Self> {
        check(1.0, t, eta)?;
        Ok(Self { eta, t })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn probe_time(&self) -> f64 {
        self.t
    }

    /// Energy-basis likelihood; only optimal, and only offered, for `eta = 1`.
    pub fn energy_likelihood(&self) -> Result<LifetimeLikelihood> {
        if self.eta != 1.0 {
            return Err(Error::Domain(format!(
                "energy-basis likelihood describes the excited-state preparation only, got eta = {}",
                self.eta
            )));
        }
        Ok(LifetimeLikelihood { t: self.t })
    }

    fn probe(&self, control: f64) -> f64 {
        if control > 0.0 {
            control
        } else {
            self.t
        }
    }
}

impl QuantumModel for LifetimeModel {
    fn dim(&self) -> usize {
        2
    }

    fn state(&self, theta: f64, control: f64) -> Result<HermitianOperator> {
        lifetime_state(theta, self.probe(control), self.eta).map(|(rho, _)| rho)
    }

    fn dstate(&self, theta: f64, control: f64) -> Result<HermitianOperator> {
        lifetime_state(theta, self.probe(control), self.eta).map(|(_, d)| d)
    }

    fn theta_scale(&self) -> f64 {
        self.t
    }

    fn default_control(&self) -> f64 {
        self.t
    }

    fn control_name(&self) -> &str {
        "probe time"
    }
}

/// `p(s | theta, t)` for the excited-state preparation; control is the probe
/// time, falling back to `t` when not positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeLikelihood {
    t: f64,
}

impl LifetimeLikelihood {
    fn probe(&self, control: f64) -> f64 {
        if control > 0.0 {
            control
        } else {
            self.t
        }
    }
}

impl LikelihoodModel for LifetimeLikelihood {
    fn outcome_space(&self, _theta: f64, _control: f64) -> OutcomeSpace {
        OutcomeSpace::Discrete(vec![0.0, 1.0])
    }

    fn probability(&self, s: f64, theta: f64, control: f64) -> f64 {
        lifetime_likelihood(s as u8, theta, self.probe(control)).unwrap_or(0.0)
    }

    fn ln_probability(&self, s: f64, theta: f64, control: f64) -> f64 {
        let t = self.probe(control);
        if theta <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if s == 1.0 {
            -t / theta
        } else {
            (-(-t / theta).exp_m1()).ln()
        }
    }

    fn derivative(&self, s: f64, theta: f64, control: f64) -> Option<f64> {
        let t = self.probe(control);
        let d = (-t / theta).exp() * t / (theta * theta);
        Some(if s == 1.0 { d } else { -d })
    }

    fn theta_scale(&self) -> f64 {
        self.t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{qfi, sld, Povm};

    #[test]
    fn ground_state_preparation_is_static() {
        let (rho, drho) = lifetime_state(0.7, 1.0, 0.0).unwrap();
        assert_eq!(rho, HermitianOperator::diagonal(&[1.0, 0.0]));
        assert!(drho.frobenius_norm() == 0.0);
        let l = sld(&rho, &drho).unwrap();
        assert!(l.frobenius_norm() == 0.0);
    }

    #[test]
    fn excited_preparation_is_diagonal() {
        let (rho, _) = lifetime_state(2.0, 1.0, 1.0).unwrap();
        let e = (-0.5f64).exp();
        assert!((rho.get(0, 0).re - (1.0 - e)).abs() < 1e-15);
        assert!((rho.get(1, 1).re - e).abs() < 1e-15);
        assert_eq!(rho.max_off_diagonal(), 0.0);
    }

    #[test]
    fn half_preparation_coherence() {
        let (rho, _) = lifetime_state(1.0, 1.0, 0.5).unwrap();
        assert!((rho.get(0, 1).re - 0.303_265_329_856_316_7).abs() < 1e-12);
    }

    #[test]
    fn likelihood_limits() {
        assert!((lifetime_likelihood(1, 1.0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(lifetime_likelihood(1, 1e6, 1.0).unwrap() > 0.999_99);
        assert!(lifetime_likelihood(0, 1e-3, 1.0).unwrap() == 1.0);
        let m = LifetimeModel::new(0.5, 1.0).unwrap();
        assert!(m.energy_likelihood().is_err());
    }

    #[test]
    fn born_rule_agrees() {
        let m = LifetimeModel::new(1.0, 1.0).unwrap();
        let povm = Povm::computational_basis(2);
        for &theta in &[0.1, 0.26, 1.0, 3.0, 10.0] {
            let p = povm.probabilities(&m.state(theta, 1.0).unwrap());
            assert!((p[0] - lifetime_likelihood(0, theta, 1.0).unwrap()).abs() < 1e-12);
            assert!((p[1] - lifetime_likelihood(1, theta, 1.0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn qfi_matches_closed_form() {
        let t = 1.0;
        let q = qfi(&LifetimeModel::new(1.0, t).unwrap(), t, t).unwrap();
        let exact = 1.0 / (t * t * (std::f64::consts::E - 1.0));
        assert!((q.value - exact).abs() < 1e-12);
        assert!((exact - 0.581_976_706_869_326_4).abs() < 1e-12);
        let q = qfi(&LifetimeModel::new(0.5, t).unwrap(), t, t).unwrap();
        assert!((q.value / lifetime_qfi(t, t, 0.5).unwrap() - 1.0).abs() < 1e-10);
    }
}
