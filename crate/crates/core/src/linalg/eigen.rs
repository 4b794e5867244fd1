use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE};
use crate::error::{Error, Result};

/// Hermiticity tolerance applied before decomposing, scaled by the largest
/// entry magnitude.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;

/// Spectral decomposition `M = V diag(values) V^dagger`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary whose k-th column (1-based) is the eigenvector of `values[k-1]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// The k-th eigenvector (0-based position in `values`).
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.vectors.dim();
        (1..=n).map(|i| self.vectors.get(i, k + 1)).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diagonal(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Exactly diagonal inputs are returned without iteration, so their
/// eigenvectors are basis vectors. For degenerate eigenvalues the
/// eigenvectors are some orthonormal basis of the eigenspace.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let scale = m.max_abs().max(1.0);
    m.check_hermitian(HERMITIAN_TOLERANCE * scale)?;
    let n = m.dim();

    if m.is_exactly_diagonal() {
        let mut order: Vec<usize> = (0..n).collect();
        let diag = m.diagonal();
        order.sort_by(|&a, &b| diag[a].re.total_cmp(&diag[b].re));
        let values = order.iter().map(|&k| diag[k].re).collect();
        let mut vectors = ComplexMatrix::zeros(n);
        for (col, &k) in order.iter().enumerate() {
            vectors.set(k + 1, col + 1, ONE);
        }
        return Ok(HermitianEigen { values, vectors });
    }

    let herm = m.hermitian_part();
    let eig = SymmetricEigen::try_new(herm.as_nalgebra().clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::InternalConsistency("eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_nalgebra(vectors) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eigen(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn diagonal_is_sorted_with_permuted_vectors() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        // eigenvalue 1 lives on |f_2>, 2 on |f_3>, 3 on |f_1>
        assert_eq!(e.vectors.get(2, 1), ONE);
        assert_eq!(e.vectors.get(3, 2), ONE);
        assert_eq!(e.vectors.get(1, 3), ONE);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..5 {
            let m = random_hermitian(8, seed);
            let e = hermitian_eigen(&m).unwrap();
            let err = (&e.reconstruct() - &m).max_abs();
            assert!(err < 1e-10, "reconstruction error {err}");
            let gram = &e.vectors.adjoint() * &e.vectors;
            assert!((&gram - &ComplexMatrix::identity(8)).max_abs() < 1e-10);
            let tr: f64 = e.values.iter().sum();
            assert!((tr - m.trace().re).abs() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn larger_dimension_accuracy() {
        let m = random_hermitian(128, 42);
        let e = hermitian_eigen(&m).unwrap();
        assert!((&e.reconstruct() - &m).max_abs() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m.set(2, 3, Complex64::new(1.0, 0.0));
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { row: 2, col: 3, .. })
        ));
    }
}
