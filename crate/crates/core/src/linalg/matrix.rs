//! Dense complex square matrices with 1-based element access.
//!
//! Rows and columns are numbered `1..=dim` in every public accessor so that
//! entry `(i, j)` is the coefficient of `|f_i><f_j|` in the price basis.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A `dim x dim` complex matrix. Operations return new values and never
/// mutate their operands.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { data: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { data: DMatrix::identity(dim, dim) }
    }

    /// Builds a matrix from a closure over 1-based `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { data: DMatrix::from_fn(dim, dim, |r, c| f(r + 1, c + 1)) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m.data[(k, k)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Row-major entries; `rows.len()` must be a perfect square.
    pub fn from_row_major(dim: usize, rows: &[Complex64]) -> Result<Self> {
        if dim == 0 || rows.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                rows.len()
            )));
        }
        Ok(Self { data: DMatrix::from_row_slice(dim, dim, rows) })
    }

    /// The matrix unit `|f_row><f_col|`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(row, col, ONE);
        m
    }

    /// The rank-one projector `|psi><psi|` (no normalization applied).
    pub fn outer(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), |i, j| psi[i - 1] * psi[j - 1].conj())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Entry at 1-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row - 1, col - 1)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[(row - 1, col - 1)] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.transpose() }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.data[(k, k)]).collect()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { data: &self.data * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self { data: &self.data * &other.data + &other.data * &self.data }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Worst Hermiticity defect as `(row, col, |m_rc - conj(m_cr)|)`, 1-based.
    pub fn hermiticity_defect(&self) -> (usize, usize, f64) {
        let n = self.dim();
        let mut worst = (1, 1, 0.0);
        for i in 0..n {
            for j in i..n {
                let d = (self.data[(i, j)] - self.data[(j, i)].conj()).norm_sqr();
                if d > worst.2 {
                    worst = (i + 1, j + 1, d);
                }
            }
        }
        (worst.0, worst.1, worst.2.sqrt())
    }

    /// Replaces `M` by `(M + M^dagger) / 2` and returns the largest
    /// `|m_ij - conj(m_ji)|` it removed.
    pub(crate) fn symmetrize_in_place(&mut self) -> f64 {
        let n = self.dim();
        let half = Complex64::new(0.5, 0.0);
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                let (a, b) = (self.data[(i, j)], self.data[(j, i)]);
                worst = worst.max((a - b.conj()).norm_sqr());
                let s = (a + b.conj()) * half;
                self.data[(i, j)] = s;
                self.data[(j, i)] = s.conj();
            }
        }
        worst.sqrt()
    }

    pub fn check_hermitian(&self, tolerance: f64) -> Result<()> {
        let (row, col, deviation) = self.hermiticity_defect();
        if deviation > tolerance {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        Ok(())
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self { data: (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    /// Entries strictly off the diagonal are all exactly zero.
    pub fn is_exactly_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.data[(i, j)] == ZERO))
    }

    /// `Tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[(i, k)] * other.data[(k, i)];
            }
        }
        acc
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub(crate) fn from_nalgebra(data: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data }
    }

    pub(crate) fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Column-major storage, element `(r, c)` (0-based) at `c * dim + r`.
    pub(crate) fn col_major(&self) -> &[Complex64] {
        self.data.as_slice()
    }

    pub(crate) fn col_major_mut(&mut self) -> &mut [Complex64] {
        self.data.as_mut_slice()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) ", self.dim(), self.dim())?;
        fmt::Debug::fmt(&self.data, f)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data * &rhs.data }
    }
}

/// Square root of the sum of squared entry magnitudes.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.as_nalgebra().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, unit-trace matrix representing a market state.
///
/// Positivity is not checked at construction; use
/// [`DensityMatrix::min_eigenvalue`] when it matters.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        matrix.check_hermitian(tolerance)?;
        let tr = matrix.trace();
        if (tr - ONE).norm() > tolerance {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self { matrix, tolerance })
    }

    /// Wraps an evolved state without re-validating it. The simulator
    /// monitors trace and Hermiticity separately.
    pub fn from_evolved(matrix: ComplexMatrix) -> Self {
        Self { matrix, tolerance: Self::DEFAULT_TOLERANCE }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn trace_error(&self) -> f64 {
        (self.matrix.trace() - ONE).norm()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = super::hermitian_eigen(&self.matrix)?;
        Ok(eig.values[0])
    }

    /// Fails when the smallest eigenvalue is below `-tolerance`.
    pub fn check_positive(&self) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue()?;
        if min_eigenvalue < -self.tolerance {
            return Err(Error::PositivityViolation { min_eigenvalue });
        }
        Ok(())
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl AsRef<ComplexMatrix> for ComplexMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        self
    }
}
