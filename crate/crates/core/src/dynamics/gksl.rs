//! Diagonal (GKSL) form of the dissipator, complete-positivity and
//! classicality checks.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::market::{LindbladCoefficients, OperatorSet};

/// Entry magnitude below which an operator column entry counts as zero.
pub const CLASSICALITY_TOLERANCE: f64 = 1e-12;

/// Dissipator written as `sum_i rate_i (L_i rho L_i^dagger - 1/2 {L_i^dagger L_i, rho})`
/// with `L_1 = cos(theta) A_u - sin(theta) A_d`, `L_2 = sin(theta) A_u + cos(theta) A_d`.
#[derive(Clone, Debug)]
pub struct GkslForm {
    pub theta: f64,
    pub lindblad_ops: [ComplexMatrix; 2],
    pub rates: [f64; 2],
    pub source: LindbladCoefficients,
}

impl GkslForm {
    /// Assembles a form from explicit jump operators, e.g. for testing the
    /// classicality criterion on arbitrary operators.
    pub fn from_parts(
        theta: f64,
        lindblad_ops: [ComplexMatrix; 2],
        rates: [f64; 2],
        source: LindbladCoefficients,
    ) -> Self {
        Self { theta, lindblad_ops, rates, source }
    }

    pub fn dissipator(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for (l, &rate) in self.lindblad_ops.iter().zip(&self.rates) {
            let ld = l.adjoint();
            let jump = &(l * rho) * &ld;
            let anti = (&ld * l).anticommutator(rho).scale_real(0.5);
            out = &out + &(&jump - &anti).scale_real(rate);
        }
        out
    }
}

/// Rotates `(A_u, A_d)` so the Kossakowski matrix becomes diagonal.
///
/// Only the symmetric case `nu_u^2 = nu_d^2` (real) is supported: then
/// `theta = pi/4` and the rates are `sigma^2 - nu^2`, `sigma^2 + nu^2`
/// (`theta = 0` and both rates `sigma^2` when `nu = 0`).
pub fn gksl_standard_form(coeffs: &LindbladCoefficients, ops: &OperatorSet) -> Result<GkslForm> {
    let (nu_u2, nu_d2) = (coeffs.nu_u2, coeffs.nu_d2);
    if nu_u2 != nu_d2 || nu_u2.im != 0.0 {
        return Err(Error::UnsupportedAsymmetric {
            nu_u2: nu_u2.to_string(),
            nu_d2: nu_d2.to_string(),
        });
    }
    let nu2 = nu_u2.re;
    let theta = if nu2 == 0.0 { 0.0 } else { FRAC_PI_4 };
    let (s, c) = theta.sin_cos();
    let l1 = &ops.a_up.scale_real(c) - &ops.a_down.scale_real(s);
    let l2 = &ops.a_up.scale_real(s) + &ops.a_down.scale_real(c);
    let rates = if nu2 == 0.0 {
        [coeffs.sigma2, coeffs.sigma2]
    } else {
        [coeffs.sigma2 - nu2, coeffs.sigma2 + nu2]
    };
    Ok(GkslForm { theta, lindblad_ops: [l1, l2], rates, source: *coeffs })
}

/// Result of [`is_completely_positive`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpReport {
    /// `nu_u^2 + nu_d^2 <= sigma^2`.
    pub completely_positive: bool,
    /// `nu_u^2 + nu_d^2` (real part).
    pub coherent_weight: f64,
    /// Eigenvalues `sigma^2 -/+ sqrt(nu_u^2 nu_d^2)` of the coefficient matrix.
    pub kossakowski_eigenvalues: [Complex64; 2],
}

/// Complete-positivity flag from the inequality `nu_u^2 + nu_d^2 <= sigma^2`.
///
/// The coefficient-matrix eigenvalues are reported alongside; they give the
/// weaker condition `nu_u nu_d <= sigma^2`, and the two need not agree.
pub fn is_completely_positive(coeffs: &LindbladCoefficients) -> CpReport {
    let coherent_weight = (coeffs.nu_u2 + coeffs.nu_d2).re;
    let root = (coeffs.nu_u2 * coeffs.nu_d2).sqrt();
    let s = Complex64::new(coeffs.sigma2, 0.0);
    CpReport {
        completely_positive: coherent_weight <= coeffs.sigma2,
        coherent_weight,
        kossakowski_eigenvalues: [s - root, s + root],
    }
}

/// True when every jump operator sends each basis vector to a multiple of a
/// single basis vector (at most one nonzero per column).
pub fn is_classical_evolution(form: &GkslForm) -> bool {
    form.lindblad_ops.iter().all(|l| {
        let n = l.dim();
        (1..=n).all(|col| {
            (1..=n).filter(|&row| l.get(row, col).norm() > CLASSICALITY_TOLERANCE).count() <= 1
        })
    })
}
