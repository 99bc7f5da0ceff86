//! Small dense Hermitian linear algebra.
//!
//! Operators are stored as `nalgebra` complex matrices. Construction checks
//! Hermiticity and then stores the exact Hermitian part, so downstream code
//! can rely on `A[i][j] == conj(A[j][i])` bit for bit.

use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 64;

/// Tolerance on `|A[i][j] - conj(A[j][i])|` accepted at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// A `d x d` complex Hermitian matrix with `1 <= d <= 64`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates and wraps a matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        let dim = matrix.nrows();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        for i in 0..dim {
            for j in i..dim {
                let deviation = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if !(deviation <= HERMITIAN_TOLERANCE) {
                    return Err(Error::NotHermitian { row: i, col: j, deviation });
                }
            }
        }
        Ok(Self::hermitian_part(matrix))
    }

    /// Builds a real symmetric operator from rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(dim, rows.first().map_or(0, Vec::len)));
        }
        Self::new(CMatrix::from_fn(dim, dim, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    /// Takes `(M + M^dagger) / 2` without validation.
    ///
    /// Used for results that are Hermitian in exact arithmetic, where only
    /// rounding breaks the symmetry.
    pub(crate) fn hermitian_part(matrix: CMatrix) -> Self {
        let adjoint = matrix.adjoint();
        Self { matrix: (matrix + adjoint).scale(0.5) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            matrix: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Rank-one projector onto the normalised direction of `v`.
    pub fn projector(v: &CVector) -> Self {
        let norm = v.norm();
        let u = v.unscale(norm);
        Self::hermitian_part(&u * u.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Real trace (the imaginary part vanishes for Hermitian matrices).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// `Re Tr(A B)`; exact for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix[(i, j)] * other.matrix[(j, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { matrix: self.matrix.map(|z| z * a) }
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, a: f64, other: &Self) {
        self.matrix.zip_apply(&other.matrix, |x, y| *x += y * a);
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    /// Anticommutator `A B + B A`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self::hermitian_part(&self.matrix * &other.matrix + &other.matrix * &self.matrix)
    }

    /// `A B A` (Hermitian when both are).
    pub fn sandwich(&self, middle: &Self) -> Self {
        Self::hermitian_part(&self.matrix * &middle.matrix * &self.matrix)
    }

    /// `V^dagger A V`.
    pub fn in_basis(&self, basis: &CMatrix) -> Self {
        Self::hermitian_part(basis.adjoint() * &self.matrix * basis)
    }

    /// `V A V^dagger`.
    pub fn from_basis(&self, basis: &CMatrix) -> Self {
        Self::hermitian_part(basis * &self.matrix * basis.adjoint())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix - &rhs.matrix }
    }
}

/// Spectral decomposition `H = V diag(values) V^dagger`, values ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            scaled.column_mut(k).scale_mut(self.values[k]);
        }
        scaled * self.vectors.adjoint()
    }

    /// Index ranges of eigenvalues whose consecutive gaps are below `gap`.
    pub fn clusters(&self, gap: f64) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] >= gap {
                out.push(start..k);
                start = k;
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues come back ascending. Each eigenvector is phased so that its
/// largest component (first one on ties) is real and positive, which makes
/// the output deterministic. Vectors inside a degenerate cluster are
/// re-orthonormalised; no particular basis inside a cluster is promised.
pub fn eigh(h: &HermitianOperator) -> EigenSystem {
    let n = h.dim();
    let decomposition = SymmetricEigen::new(h.matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values: Vec<f64> = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| decomposition.eigenvectors[(i, order[j])]);

    let system = EigenSystem { values, vectors: vectors.clone() };
    for cluster in system.clusters(DEGENERACY_GAP) {
        if cluster.len() > 1 {
            gram_schmidt(&mut vectors, cluster);
        }
    }
    for k in 0..n {
        fix_phase(&mut vectors, k);
    }
    EigenSystem { values: system.values, vectors }
}

fn gram_schmidt(vectors: &mut CMatrix, columns: std::ops::Range<usize>) {
    for k in columns.clone() {
        for prev in columns.start..k {
            let p = vectors.column(prev).into_owned();
            let overlap = p.dotc(&vectors.column(k));
            let mut col = vectors.column_mut(k);
            col -= p * overlap;
        }
        let norm = vectors.column(k).norm();
        vectors.column_mut(k).unscale_mut(norm);
    }
}

fn fix_phase(vectors: &mut CMatrix, k: usize) {
    let col = vectors.column(k);
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = col
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let z = col[pivot];
    let phase = z.conj() / z.norm();
    vectors.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    // Remove residual imaginary rounding on the pivot.
    vectors[(pivot, k)] = Complex64::new(vectors[(pivot, k)].norm(), 0.0);
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMatrix::from_fn(dim, dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        HermitianOperator::hermitian_part(m)
    }

    #[test]
    fn diagonal_input_gives_identity_vectors() {
        let sys = eigh(&HermitianOperator::diagonal(&[1.0, 2.0]));
        assert_eq!(sys.values, vec![1.0, 2.0]);
        assert!((&sys.vectors - CMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = HermitianOperator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let sys = eigh(&x);
        assert!((sys.values[0] + 1.0).abs() < 1e-14);
        assert!((sys.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = sys.vector(0);
        let v1 = sys.vector(1);
        assert!((v0[0] - c(s, 0.0)).norm() < 1e-14 && (v0[1] - c(-s, 0.0)).norm() < 1e-14);
        assert!((v1[0] - c(s, 0.0)).norm() < 1e-14 && (v1[1] - c(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let h = random_hermitian(4, 7);
        let sys = eigh(&h);
        assert!((sys.reconstruct() - h.matrix()).norm() < 1e-10);
        let gram = sys.vectors.adjoint() * &sys.vectors;
        assert!((gram - CMatrix::identity(4, 4)).norm() < 1e-10);
        assert!(sys.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rediagonalisation_is_idempotent() {
        for seed in 0..20 {
            let h = random_hermitian(5, seed);
            let sys = eigh(&h);
            let again = eigh(&HermitianOperator::hermitian_part(sys.reconstruct()));
            for (a, b) in sys.values.iter().zip(&again.values) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let h = random_hermitian(6, 3);
        assert_eq!(eigh(&h), eigh(&h));
    }

    #[test]
    fn degenerate_cluster_stays_orthonormal() {
        let h = HermitianOperator::diagonal(&[1.0, 1.0, 1.0, 2.0]);
        let u = eigh(&random_hermitian(4, 11)).vectors;
        let rotated = HermitianOperator::hermitian_part(&u * h.matrix() * u.adjoint());
        let sys = eigh(&rotated);
        let gram = sys.vectors.adjoint() * &sys.vectors;
        assert!((gram - CMatrix::identity(4, 4)).norm() < 1e-10);
        assert!((sys.reconstruct() - rotated.matrix()).norm() < 1e-10);
        assert_eq!(sys.clusters(1e-9), vec![0..3, 3..4]);
    }

    #[test]
    fn rejects_non_hermitian_naming_entry() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 2)] = c(0.5, 0.0);
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { row, col, .. }) => assert_eq!((row, col), (0, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            HermitianOperator::new(CMatrix::zeros(0, 0)),
            Err(Error::UnsupportedDimension(0))
        ));
        assert!(matches!(
            HermitianOperator::new(CMatrix::zeros(65, 65)),
            Err(Error::UnsupportedDimension(65))
        ));
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn complex_entries_are_hermitian_after_construction() {
        let h = random_hermitian(3, 5);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.get(i, j), h.get(j, i).conj());
            }
        }
    }
}
