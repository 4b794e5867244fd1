//! Dense complex linear algebra: matrices, Hermitian eigendecomposition and
//! seeded random unitaries.

mod eigen;
mod matrix;
pub mod random;

pub use eigen::{hermitian_eigen, HermitianEigen, HERMITIAN_TOLERANCE};
pub use matrix::{frobenius_norm, ComplexMatrix, DensityMatrix, ONE, ZERO};
pub use random::haar_random_unitary;
