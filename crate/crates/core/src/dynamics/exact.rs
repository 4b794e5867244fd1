//! Exact propagation for small dimensions: the generator as a dense
//! `N^2 x N^2` superoperator, exponentiated by scaling and squaring.
//!
//! The superoperator is assembled from Kronecker products,
//! `vec(A X B) = (B^T (x) A) vec(X)` with column-stacking `vec`, so it does not
//! share code with the index-arithmetic generator it is used to check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::market::{LindbladCoefficients, OperatorSet};

pub const MAX_EXACT_DIM: usize = 12;

type Dense = DMatrix<Complex64>;

/// Dense superoperator of the generator.
pub fn superoperator(coeffs: &LindbladCoefficients, ops: &OperatorSet) -> Result<Dense> {
    let n = ops.dim;
    if n > MAX_EXACT_DIM {
        return Err(Error::TooLarge { dim: n, max: MAX_EXACT_DIM });
    }
    let u = ops.a_up.as_nalgebra();
    let d = ops.a_down.as_nalgebra();
    let id = Dense::identity(n, n);
    // A X B - 1/2 (B A X + X B A)
    let channel = |a: &Dense, b: &Dense| -> Dense {
        let ba = b * a;
        b.transpose().kronecker(a) - (id.kronecker(&ba) + ba.transpose().kronecker(&id)) * Complex64::new(0.5, 0.0)
    };
    let mut s = (channel(u, d) + channel(d, u)) * Complex64::new(coeffs.sigma2, 0.0);
    s += channel(u, u) * coeffs.nu_u2;
    s += channel(d, d) * coeffs.nu_d2;
    Ok(s)
}

fn one_norm(m: &Dense) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(m)` by Taylor series on `m / 2^s` followed by `s` squarings.
pub fn expm(m: &Dense) -> Dense {
    let dim = m.nrows();
    let norm = one_norm(m);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m * Complex64::new(0.5f64.powi(squarings), 0.0);

    let mut result = Dense::identity(dim, dim);
    let mut term = Dense::identity(dim, dim);
    for k in 1..=40 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn vec_of(m: &ComplexMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_nalgebra().as_slice())
}

fn unvec(v: &DVector<Complex64>, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra(DMatrix::from_column_slice(n, n, v.as_slice()))
}

/// `exp(t L) rho0` computed exactly (up to rounding).
pub fn exact_propagate_small(
    rho0: &DensityMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    t: f64,
) -> Result<DensityMatrix> {
    Ok(ExactPropagator::new(coeffs, ops, t)?.apply(rho0))
}

/// Cached `exp(t L)` for repeated application.
pub struct ExactPropagator {
    dim: usize,
    map: Dense,
}

impl ExactPropagator {
    pub fn new(coeffs: &LindbladCoefficients, ops: &OperatorSet, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
        }
        let s = superoperator(coeffs, ops)?;
        Ok(Self { dim: ops.dim, map: expm(&(s * Complex64::new(t, 0.0))) })
    }

    pub fn apply(&self, rho0: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_evolved(unvec(&(&self.map * vec_of(rho0.matrix())), self.dim))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{apply_generator, euler_step};
    use crate::linalg::random::{random_hermitian_with, seeded_rng};
    use crate::linalg::ComplexMatrix;
    use crate::market::{dirac_state, make_shift_operators, BoundaryMode};

    #[test]
    fn superoperator_matches_generator() {
        let mut rng = seeded_rng(12);
        let c = LindbladCoefficients::from_rates(0.4, 0.3, 0.3);
        for mode in [BoundaryMode::HardWall, BoundaryMode::Periodic] {
            let ops = make_shift_operators(6, mode).unwrap();
            let s = superoperator(&c, &ops).unwrap();
            let x = random_hermitian_with(6, &mut rng);
            let via_super = unvec(&(&s * vec_of(&x)), 6);
            let direct = apply_generator(&x, &c, &ops).unwrap();
            assert!((&via_super - &direct).max_abs() < 1e-14);
        }
    }

    #[test]
    fn expm_of_scalar_and_diagonal() {
        let m = Dense::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.5, 1.0),
        ]));
        let e = expm(&m);
        assert!((e[(0, 0)].re - (-3.0f64).exp()).abs() < 1e-15);
        assert!((e[(1, 1)] - Complex64::new(0.5, 1.0).exp()).norm() < 1e-14);
        assert_eq!(e[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn time_zero_is_identity() {
        let ops = make_shift_operators(5, BoundaryMode::HardWall).unwrap();
        let rho = dirac_state(5, 2).unwrap();
        let c = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
        assert_eq!(exact_propagate_small(&rho, &c, &ops, 0.0).unwrap(), rho);
    }

    #[test]
    fn uniform_is_stationary() {
        let ops = make_shift_operators(5, BoundaryMode::Periodic).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::identity(5).scale_real(0.2)).unwrap();
        let c = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
        for t in [0.5, 3.0, 50.0] {
            let out = exact_propagate_small(&rho, &c, &ops, t).unwrap();
            assert!((out.matrix() - rho.matrix()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn trace_is_preserved() {
        let ops = make_shift_operators(7, BoundaryMode::HardWall).unwrap();
        let rho = dirac_state(7, 2).unwrap();
        let c = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
        let out = exact_propagate_small(&rho, &c, &ops, 30.0).unwrap();
        assert!(out.trace_error() < 1e-12);
    }

    #[test]
    fn euler_converges_first_order() {
        let ops = make_shift_operators(5, BoundaryMode::HardWall).unwrap();
        let rho0 = dirac_state(5, 3).unwrap();
        let c = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
        let exact = exact_propagate_small(&rho0, &c, &ops, 1.0).unwrap();
        let err = |dt: f64| {
            let steps = (1.0 / dt).round() as usize;
            let mut rho = rho0.clone();
            for _ in 0..steps {
                rho = euler_step(&rho, &c, &ops, dt).unwrap();
            }
            (rho.matrix() - exact.matrix()).max_abs()
        };
        let ratio = err(0.01) / err(0.005);
        assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn too_large_is_rejected() {
        let ops = make_shift_operators(13, BoundaryMode::HardWall).unwrap();
        let rho = dirac_state(13, 2).unwrap();
        assert!(matches!(
            exact_propagate_small(&rho, &LindbladCoefficients::classical(0.4), &ops, 1.0),
            Err(Error::TooLarge { .. })
        ));
    }
}
