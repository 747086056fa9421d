use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on `max |A - A^dagger|` for an operator to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix in `[-EIGEN_CLIP_TOL, 0)` are treated as round-off.
pub const EIGEN_CLIP_TOL: f64 = 1e-12;
/// Tolerance on `max |U U^dagger - 1|` for propagators.
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in ascending order and
/// eigenvectors stored column-wise in the same order.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    /// Assumes `m` is Hermitian; only the Hermitian part is used.
    pub(crate) fn of(m: &CMatrix) -> Eigh {
        let eig = SymmetricEigen::new(symmetrized(m));
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        Eigh { values, vectors }
    }

    /// `sum_k f(e_k) |k><k|`.
    pub fn map<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (col, &e) in self.values.iter().enumerate() {
            let factor = f(e);
            for r in 0..n {
                scaled[(r, col)] *= factor;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Diagonal of `V^dagger m V`, i.e. the populations of `m` in this eigenbasis.
    pub fn populations(&self, m: &CMatrix) -> Vec<f64> {
        let n = self.values.len();
        (0..n)
            .map(|k| {
                let v = self.vectors.column(k);
                (v.adjoint() * m * v)[(0, 0)].re
            })
            .collect()
    }
}

/// A square complex operator on a finite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    hermitian: bool,
}

impl Operator {
    /// Wraps a square matrix. The Hermitian flag is set when the matrix is
    /// Hermitian to `HERMITIAN_TOL`, in which case it is also symmetrized exactly.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let hermitian = hermitian_deviation(&matrix) <= HERMITIAN_TOL;
        let matrix = if hermitian { symmetrized(&matrix) } else { matrix };
        Ok(Operator { matrix, hermitian })
    }

    /// Like [`Operator::new`] but fails unless the matrix is Hermitian.
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        let op = Operator::new(matrix)?;
        op.require_hermitian()?;
        Ok(op)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let matrix = CMatrix::from_fn(n, n, |r, col| if r == col { c(entries[r]) } else { c(0.0) });
        Operator { matrix, hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { matrix: CMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { matrix: CMatrix::zeros(dim, dim), hermitian: true }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(Error::NonHermitian { deviation: hermitian_deviation(&self.matrix) })
        }
    }

    pub fn adjoint(&self) -> Operator {
        Operator { matrix: self.matrix.adjoint(), hermitian: self.hermitian }
    }

    /// Hermitian eigendecomposition (ascending eigenvalues).
    pub fn eigh(&self) -> Result<Eigh> {
        self.require_hermitian()?;
        Ok(Eigh::of(&self.matrix))
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.values)
    }

    /// `self (x) other`, with `self` as the left factor.
    pub fn kron(&self, other: &Operator) -> Operator {
        Operator {
            matrix: self.matrix.kronecker(&other.matrix),
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// `Re Tr{self rho}`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        trace_product(&self.matrix, rho.matrix()).re
    }

    pub fn scale(&self, factor: f64) -> Operator {
        Operator { matrix: &self.matrix * c(factor), hermitian: self.hermitian }
    }

    /// Largest eigenvalue magnitude of a Hermitian operator.
    pub fn spectral_norm(&self) -> Result<f64> {
        let values = self.spectrum()?;
        Ok(values.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }
}

/// `Tr{a b}` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator { matrix: &self.matrix + &rhs.matrix, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator { matrix: &self.matrix - &rhs.matrix, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        let matrix = &self.matrix * &rhs.matrix;
        let hermitian = hermitian_deviation(&matrix) <= HERMITIAN_TOL;
        Operator { matrix, hermitian }
    }
}

/// Positive, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues `>= -1e-12`).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:.3e})")));
        }
        let rho = DensityMatrix { matrix: symmetrized(&matrix) };
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lowest = rho.eigenvalues()[0];
        if lowest < -EIGEN_CLIP_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(rho)
    }

    /// For matrices produced by trace- and positivity-preserving maps of a
    /// valid state; only re-symmetrizes.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        DensityMatrix { matrix: symmetrized(&matrix) }
    }

    /// Diagonal state with the given populations (renormalized).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let total: f64 = populations.iter().sum();
        if populations.iter().any(|p| *p < 0.0 || !p.is_finite()) || total <= 0.0 {
            return Err(Error::InvalidState("populations must be nonnegative with positive sum".into()));
        }
        let normalized: Vec<f64> = populations.iter().map(|p| p / total).collect();
        Ok(DensityMatrix { matrix: Operator::diagonal(&normalized).matrix })
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let n = amplitudes.len();
        let matrix = CMatrix::from_fn(n, n, |r, col| amplitudes[r] * amplitudes[col].conj() / norm);
        Ok(DensityMatrix { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(dim, dim) * c(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Ascending eigenvalues (not clipped).
    pub fn eigenvalues(&self) -> Vec<f64> {
        Eigh::of(&self.matrix).values
    }

    pub fn eigh(&self) -> Eigh {
        Eigh::of(&self.matrix)
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: self.matrix.kronecker(&other.matrix) }
    }

    /// `U rho U^dagger`.
    pub fn evolve(&self, u: &UnitaryPropagator) -> DensityMatrix {
        DensityMatrix::from_trusted(&u.matrix * &self.matrix * u.matrix.adjoint())
    }

    /// `U rho U^dagger` for an arbitrary unitary matrix.
    pub(crate) fn conjugate_by(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix::from_trusted(u * &self.matrix * u.adjoint())
    }

    /// Trace distance `||self - other||_1 / 2`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        0.5 * Eigh::of(&diff).values.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// Real Bloch components `(Tr{X rho}, Tr{Y rho}, Tr{Z rho})` of a qubit in the
    /// (ground, excited) basis used throughout the crate.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim() });
        }
        let [x, y, z] = crate::models::pauli();
        Ok([x.expectation(self), y.expectation(self), z.expectation(self)])
    }
}

/// `exp(-i H dt)` for a Hermitian generator.
#[derive(Clone, Debug)]
pub struct UnitaryPropagator {
    matrix: CMatrix,
}

impl UnitaryPropagator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |U U^dagger - 1|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        max_abs(&(&self.matrix * self.matrix.adjoint() - CMatrix::identity(n, n)))
    }

    pub(crate) fn from_spectrum(eig: &Eigh, dt: f64) -> UnitaryPropagator {
        UnitaryPropagator { matrix: eig.map(|e| Complex64::from_polar(1.0, -e * dt)) }
    }
}

/// `U = exp(-i H dt)` via the Hermitian eigendecomposition of `H`.
pub fn propagator(h: &Operator, dt: f64) -> Result<UnitaryPropagator> {
    let eig = h.eigh()?;
    Ok(UnitaryPropagator::from_spectrum(&eig, dt))
}

/// A Hermitian generator diagonalized once, for evaluating `exp(-i H t)` at many times.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    eig: Eigh,
}

impl SpectralPropagator {
    pub fn new(h: &Operator) -> Result<Self> {
        Ok(SpectralPropagator { eig: h.eigh()? })
    }

    pub fn at(&self, t: f64) -> UnitaryPropagator {
        UnitaryPropagator::from_spectrum(&self.eig, t)
    }

    pub fn energies(&self) -> &[f64] {
        &self.eig.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_square_is_rejected() {
        assert!(Operator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn hermitian_flag_tracks_matrix() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        assert!(Operator::new(m.clone()).unwrap().is_hermitian());
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        let op = Operator::new(m).unwrap();
        assert!(!op.is_hermitian());
        assert!(matches!(propagator(&op, 1.0), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err());
        let neg = Operator::diagonal(&[1.1, -0.1]).matrix().clone();
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidState(_))));
        let tiny = Operator::diagonal(&[1.0 + 5e-13, -5e-13]).matrix().clone();
        assert!(DensityMatrix::new(tiny).is_ok());
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let h = Operator::diagonal(&[-0.5, 0.5]);
        let u = propagator(&h, 0.0).unwrap();
        assert!(max_abs(&(u.matrix() - CMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn propagator_of_diagonal_generator() {
        let omega = 1.3;
        let t = 0.7;
        let h = Operator::diagonal(&[-omega / 2.0, omega / 2.0]);
        let u = propagator(&h, t).unwrap();
        let expected = [Complex64::from_polar(1.0, omega * t / 2.0), Complex64::from_polar(1.0, -omega * t / 2.0)];
        for (k, e) in expected.iter().enumerate() {
            assert!((u.matrix()[(k, k)] - e).norm() < 1e-14);
        }
        assert!(u.matrix()[(0, 1)].norm() < 1e-15);
        assert!(u.unitarity_error() < UNITARY_TOL);
    }

    #[test]
    fn eigh_is_sorted_and_reconstructs() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(2.0);
        m[(1, 1)] = c(-1.0);
        m[(2, 2)] = c(0.5);
        m[(0, 2)] = Complex64::new(0.3, 0.4);
        m[(2, 0)] = Complex64::new(0.3, -0.4);
        let eig = Eigh::of(&m);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = eig.map(c);
        assert!(max_abs(&(rebuilt - m)) < 1e-13);
    }
}
