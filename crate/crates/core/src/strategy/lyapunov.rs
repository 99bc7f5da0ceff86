//! The Lyapunov equation `S rho + rho S = 2 R`, the symmetric logarithmic
//! derivative and the quantum Fisher information.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{eigh, CMatrix, HermitianOperator};
use crate::strategy::model::QuantumModel;

/// Eigenvalue pairs summing below this are treated as a null block.
pub const NULL_SUM: f64 = 1e-12;

/// Right-hand side entries up to this size are allowed on a null block.
pub const NULL_RHS: f64 = 1e-10;

/// Solves `S rho0 + rho0 S = 2 rho1` in the eigenbasis of `rho0`:
/// `S_ij = 2 (rho1)_ij / (lambda_i + lambda_j)`.
///
/// Entries on the null space of `rho0` are set to zero when the right-hand
/// side vanishes there and rejected otherwise.
pub fn solve_lyapunov(rho0: &HermitianOperator, rho1: &HermitianOperator) -> Result<HermitianOperator> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), rho1.dim()));
    }
    let eig = eigh(rho0);
    let r = rho1.in_basis(&eig.vectors);
    let n = rho0.dim();
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sum = eig.values[i] + eig.values[j];
            let rhs = r.get(i, j);
            if sum < NULL_SUM {
                if rhs.norm() > NULL_RHS {
                    return Err(Error::InconsistentLyapunov { i, j, sum, rhs: rhs.norm() });
                }
                s[(i, j)] = Complex64::new(0.0, 0.0);
            } else {
                s[(i, j)] = rhs * (2.0 / sum);
            }
        }
    }
    HermitianOperator::new(s).map(|s| s.from_basis(&eig.vectors))
}

/// `||S rho0 + rho0 S - 2 rho1||_F`.
pub fn lyapunov_residual(s: &HermitianOperator, rho0: &HermitianOperator, rho1: &HermitianOperator) -> f64 {
    (&s.anticommutator(rho0) - &rho1.scale(2.0)).frobenius_norm()
}

/// Symmetric logarithmic derivative: `(L rho + rho L) / 2 = drho`.
pub fn sld(rho: &HermitianOperator, drho: &HermitianOperator) -> Result<HermitianOperator> {
    solve_lyapunov(rho, drho)
}

/// Eigenvalues above this count toward the rank.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// Relative offset at which the rank is re-checked around `theta`.
pub const RANK_PROBE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumFisher {
    pub value: f64,
    /// The rank of the state changes near `theta`, where the QFI and the
    /// Bures metric need not agree.
    pub rank_change: bool,
}

fn rank(rho: &HermitianOperator) -> usize {
    eigh(rho).values.iter().filter(|&&v| v > RANK_THRESHOLD).count()
}

/// `Tr(rho L^2)` at `(theta, control)`.
pub fn qfi<M: QuantumModel + ?Sized>(model: &M, theta: f64, control: f64) -> Result<QuantumFisher> {
    let rho = model.state(theta, control)?;
    let drho = model.dstate(theta, control)?;
    let l = sld(&rho, &drho)?;
    let l_squared = l.sandwich(&HermitianOperator::identity(rho.dim()));
    let value = rho.trace_product(&l_squared);
    let h = RANK_PROBE * theta.abs().max(model.theta_scale());
    let r = rank(&rho);
    let rank_change = [theta - h, theta + h]
        .iter()
        .filter_map(|&t| model.state(t, control).ok())
        .any(|s| rank(&s) != r);
    Ok(QuantumFisher { value: value.max(0.0), rank_change })
}
