//! The Markovian generator of the market state and its adjoint.
//!
//! ```text
//! d rho/dt = sigma^2 (A_u rho A_d + A_d rho A_u - 1/2 {A_u A_d + A_d A_u, rho})
//!          + nu_u^2  (A_u rho A_u - 1/2 {A_u A_u, rho})
//!          + nu_d^2  (A_d rho A_d - 1/2 {A_d A_d, rho})
//! ```
//!
//! The drift (Hamiltonian) term is zero throughout.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::market::{BoundaryMode, LindbladCoefficients, OperatorSet};

/// `d rho / dt` for the given coefficients and shift operators.
///
/// Plain shift operators are applied by index arithmetic; conjugated
/// operator sets go through dense matrix products.
pub fn apply_generator(
    rho: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
) -> Result<ComplexMatrix> {
    check_dims(rho, ops)?;
    if ops.is_shift_form() {
        Ok(shift_update(rho, coeffs, ops.boundary_mode, 1.0, false))
    } else {
        Ok(dense_generator(rho, coeffs, ops))
    }
}

fn check_dims(m: &ComplexMatrix, ops: &OperatorSet) -> Result<()> {
    if m.dim() != ops.dim {
        return Err(Error::DimensionMismatch { expected: ops.dim, found: m.dim() });
    }
    Ok(())
}

thread_local! {
    static PADDED: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

/// `base + scale * L(rho)` for plain shift operators, where `base` is `rho`
/// itself when `add_rho` is set and zero otherwise.
///
/// `rho` is copied into a buffer with a two-entry border (zeros for hard
/// walls, wrapped entries for periodic ones) so the stencil needs no bounds
/// checks.
fn shift_update(
    rho: &ComplexMatrix,
    c: &LindbladCoefficients,
    mode: BoundaryMode,
    scale: f64,
    add_rho: bool,
) -> ComplexMatrix {
    let n = rho.dim();
    let m = n + 4;
    let src = rho.col_major();
    // diagonal of A_u A_d + A_d A_u
    let weight: Vec<f64> = (0..n)
        .map(|i| match mode {
            BoundaryMode::HardWall if n == 1 => 0.0,
            BoundaryMode::HardWall if i == 0 || i == n - 1 => 1.0,
            _ => 2.0,
        })
        .collect();
    let sigma2 = c.sigma2;
    let (nu_u2, nu_d2) = (c.nu_u2, c.nu_d2);
    let coherent = !c.is_classical();

    let mut out = ComplexMatrix::zeros(n);
    PADDED.with_borrow_mut(|pad| {
        pad.clear();
        pad.resize(m * m, ZERO);
        for pj in 0..m {
            let j = match mode {
                BoundaryMode::Periodic => (pj + 2 * n - 2) % n,
                BoundaryMode::HardWall if (2..n + 2).contains(&pj) => pj - 2,
                BoundaryMode::HardWall => continue,
            };
            for pi in 0..m {
                let i = match mode {
                    BoundaryMode::Periodic => (pi + 2 * n - 2) % n,
                    BoundaryMode::HardWall if (2..n + 2).contains(&pi) => pi - 2,
                    BoundaryMode::HardWall => continue,
                };
                pad[pj * m + pi] = src[j * n + i];
            }
        }
        let dst = out.col_major_mut();
        // real rates multiply as f64, which gives the same bits at half the cost
        if nu_u2.im == 0.0 && nu_d2.im == 0.0 {
            stencil(pad, dst, &weight, sigma2, nu_u2.re, nu_d2.re, coherent, scale, add_rho);
        } else {
            stencil(pad, dst, &weight, sigma2, nu_u2, nu_d2, coherent, scale, add_rho);
        }
    });
    out
}

/// A coherent rate, real or complex.
trait Rate: Copy {
    fn times(self, z: Complex64) -> Complex64;
}

impl Rate for f64 {
    fn times(self, z: Complex64) -> Complex64 {
        z * self
    }
}

impl Rate for Complex64 {
    fn times(self, z: Complex64) -> Complex64 {
        z * self
    }
}

#[allow(clippy::too_many_arguments)]
fn stencil<T: Rate>(
    pad: &[Complex64],
    dst: &mut [Complex64],
    weight: &[f64],
    sigma2: f64,
    nu_u2: T,
    nu_d2: T,
    coherent: bool,
    scale: f64,
    add_rho: bool,
) {
    let n = weight.len();
    let m = n + 4;
    for j in 0..n {
        let col = |d: usize| &pad[(j + d) * m..][..m];
        let (cm2, cm1, c0, cp1, cp2) = (col(0), col(1), col(2), col(3), col(4));
        let wj = weight[j];
        for i in 0..n {
            let p = i + 2;
            let here = c0[p];
            // sigma^2: A_u rho A_d -> rho[i-1][j-1], A_d rho A_u -> rho[i+1][j+1]
            let mut v = (cm1[p - 1] + cp1[p + 1] - here * (0.5 * (weight[i] + wj))) * sigma2;
            if coherent {
                // A_u rho A_u -> rho[i-1][j+1]; A_u A_u rho -> rho[i-2][j]; rho A_u A_u -> rho[i][j+2]
                let up = cp1[p - 1] - (c0[p - 2] + cp2[p]) * 0.5;
                // A_d rho A_d -> rho[i+1][j-1]; A_d A_d rho -> rho[i+2][j]; rho A_d A_d -> rho[i][j-2]
                let down = cm1[p + 1] - (c0[p + 2] + cm2[p]) * 0.5;
                v += nu_u2.times(up) + nu_d2.times(down);
            }
            dst[j * n + i] = if add_rho { here + v * scale } else { v * scale };
        }
    }
}

/// `rho + dt * L(rho)` without forming `L(rho)` separately when the operators
/// are plain shifts.
pub(crate) fn euler_update(
    rho: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    dt: f64,
) -> Result<ComplexMatrix> {
    check_dims(rho, ops)?;
    if ops.is_shift_form() {
        Ok(shift_update(rho, coeffs, ops.boundary_mode, dt, true))
    } else {
        Ok(rho + &dense_generator(rho, coeffs, ops).scale_real(dt))
    }
}

/// `A rho B - 1/2 {B A, rho}` for one dissipator channel pair.
fn channel(a: &ComplexMatrix, rho: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let jump = &(a * rho) * b;
    let ba = b * a;
    &jump - &ba.anticommutator(rho).scale_real(0.5)
}

fn dense_generator(rho: &ComplexMatrix, c: &LindbladCoefficients, ops: &OperatorSet) -> ComplexMatrix {
    let (u, d) = (&ops.a_up, &ops.a_down);
    // A_u rho A_d - 1/2 {A_d A_u, rho} + A_d rho A_u - 1/2 {A_u A_d, rho}
    let diffusion = &channel(u, rho, d) + &channel(d, rho, u);
    let mut out = diffusion.scale_real(c.sigma2);
    if c.nu_u2 != ZERO {
        out = &out + &channel(u, rho, u).scale(c.nu_u2);
    }
    if c.nu_d2 != ZERO {
        out = &out + &channel(d, rho, d).scale(c.nu_d2);
    }
    out
}

/// `L(M)_ij = M_(i-1)(j-1) + M_(i+1)(j+1) - 2 M_ij`, out-of-range entries
/// read as zero.
pub fn apply_shift_l(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    ComplexMatrix::from_fn(n, |i, j| {
        let mut v = m.get(i, j) * -2.0;
        if i > 1 && j > 1 {
            v += m.get(i - 1, j - 1);
        }
        if i < n && j < n {
            v += m.get(i + 1, j + 1);
        }
        v
    })
}

/// Rates `dp_i/dt` of the diagonal-only (classical) evolution.
///
/// Interior points follow the discrete Laplacian
/// `sigma^2 (p_{i+1} + p_{i-1} - 2 p_i)`; with hard walls the end points lose
/// one neighbour, giving `sigma^2 (p_2 - p_1)` and `sigma^2 (p_{N-1} - p_N)`.
pub fn apply_classical_generator(p: &[f64], sigma2: f64, mode: BoundaryMode) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let (left, right) = match mode {
                BoundaryMode::Periodic => (Some(p[(i + n - 1) % n]), Some(p[(i + 1) % n])),
                BoundaryMode::HardWall => {
                    (i.checked_sub(1).map(|k| p[k]), p.get(i + 1).copied())
                }
            };
            let mut rate = 0.0;
            if let Some(l) = left {
                rate += l - p[i];
            }
            if let Some(r) = right {
                rate += r - p[i];
            }
            sigma2 * rate
        })
        .collect()
}

/// Adjoint (Heisenberg-picture) generator acting on an observable:
/// `sum_{k,l in {u,d}} c_kl (A_k F A_l - 1/2 {A_k A_l, F})`
/// with `c_ud = c_du = sigma^2`, `c_uu = nu_u^2`, `c_dd = nu_d^2`.
pub fn apply_adjoint_generator(
    f: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
) -> Result<ComplexMatrix> {
    check_dims(f, ops)?;
    let (u, d) = (&ops.a_up, &ops.a_down);
    let s = Complex64::new(coeffs.sigma2, 0.0);
    let pairs = [(u, d, s), (d, u, s), (u, u, coeffs.nu_u2), (d, d, coeffs.nu_d2)];
    let mut out = ComplexMatrix::zeros(f.dim());
    for (a_k, a_l, c) in pairs {
        if c == ZERO {
            continue;
        }
        let sandwich = &(a_k * f) * a_l;
        let anti = (a_k * a_l).anticommutator(f).scale_real(0.5);
        out = &out + &(&sandwich - &anti).scale(c);
    }
    Ok(out)
}

/// One explicit Euler step of an observable in the Heisenberg picture.
pub fn heisenberg_step(
    f: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    dt: f64,
) -> Result<ComplexMatrix> {
    let g = apply_adjoint_generator(f, coeffs, ops)?;
    Ok(f + &g.scale_real(dt))
}
