//! Digamma and trigamma functions on the positive real axis.
//!
//! Both use upward recurrence until the argument exceeds [`ASYMPTOTIC_THRESHOLD`]
//! and then the Bernoulli asymptotic series, which is accurate to well below
//! `1e-15` relative there.

use crate::error::{Error, Result};

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B_{2k} for k = 1..=7.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

fn check_domain(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("polygamma argument must be positive and finite, got {x}")))
    }
}

/// psi^(0)(x) = d/dx ln Gamma(x), for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_domain(x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // sum_k B_{2k} / (2k x^{2k}), evaluated from the smallest term up
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate().rev() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series = series * inv2 + b / two_k;
    }
    series *= inv2;
    Ok(shift + x.ln() - 0.5 / x - series)
}

/// psi^(1)(x) = d^2/dx^2 ln Gamma(x), for x > 0. Always strictly positive.
pub fn trigamma(x: f64) -> Result<f64> {
    check_domain(x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // sum_k B_{2k} / x^{2k+1}
    let mut series = 0.0;
    for b in BERNOULLI.iter().rev() {
        series = series * inv2 + b;
    }
    series *= inv2 * inv;
    Ok(shift + inv + 0.5 * inv2 + series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    // mpmath, 30 significant digits
    const REFERENCE: [(f64, f64, f64); 10] = [
        (0.001, -1000.5755719318103005, 1000001.642533195869),
        (0.1, -10.423754940411076795, 101.43329915079275882),
        (0.5, -1.9635100260214234794, 4.9348022005446793094),
        (1.0, -0.57721566490153286061, 1.6449340668482264365),
        (2.5, 0.70315664064524318723, 0.49035775610023486497),
        (7.25, 1.9104535268837360284, 0.14787923315893216965),
        (10.0, 2.2517525890667211076, 0.10516633568168574612),
        (33.3, 3.4904672385202428639, 0.030485444095338885149),
        (1000.0, 6.9072551956488120521, 0.0010005001666666333334),
        (1e6, 13.815510057964190771, 1.0000005000001666667e-6),
    ];

    #[test]
    fn matches_reference_table() {
        for (x, psi0, psi1) in REFERENCE {
            let d = digamma(x).unwrap();
            let t = trigamma(x).unwrap();
            assert!((d - psi0).abs() <= 1e-12 * psi0.abs().max(1.0), "digamma({x}) = {d}");
            assert!((t - psi1).abs() <= 1e-12 * psi1.abs().max(1.0), "trigamma({x}) = {t}");
        }
    }

    #[test]
    fn special_values() {
        assert!((digamma(1.0).unwrap() + 0.5772156649015329).abs() < 1e-12);
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((trigamma(1.0).unwrap() - pi2_6).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - digamma(1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recurrence_on_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let x: f64 = rng.random_range(1e-9..=100.0);
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((lhs - 1.0 / x).abs() <= 1e-11 * (1.0 / x).max(1.0), "x = {x}");
        }
    }

    #[test]
    fn trigamma_positive() {
        for x in [1e-3, 0.3, 4.0, 50.0, 1e6] {
            assert!(trigamma(x).unwrap() > 0.0);
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(matches!(digamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(trigamma(-2.0), Err(Error::Domain(_))));
        assert!(digamma(f64::NAN).is_err());
    }
}
