//! Scalar and structural diagnostics of a market state.
//!
//! Entropies are in nats. Price probabilities are the diagonal entries
//! `p_i = rho_ii` in the price basis.

use num_complex::Complex64;

use crate::dynamics::euler_step;
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, hermitian_eigen, ComplexMatrix, DensityMatrix, ZERO};
use crate::market::{BoundaryMode, LindbladCoefficients, OperatorSet, PriceObservable};

/// Eigenvalues below this are a positivity violation rather than rounding.
pub const POSITIVITY_FLOOR: f64 = -1e-6;
/// Eigenvalues at or below this are dropped from the variance metric.
pub const EIGENVALUE_CUTOFF: f64 = 1e-10;
/// Variances below this count as zero.
pub const VARIANCE_FLOOR: f64 = 1e-14;
/// Shannon entropies below this mean a fully determined price.
pub const SHANNON_FLOOR: f64 = 1e-12;

/// `-sum p log p` over `p` clamped to `[0, 1]`, summed in ascending order so
/// equal multisets give bit-identical results.
pub fn entropy_of_distribution(p: &[f64]) -> f64 {
    let mut clamped: Vec<f64> = p.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    clamped.sort_by(f64::total_cmp);
    0.0 - clamped.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// Von Neumann entropy `-Tr[rho log rho]`.
///
/// Eigenvalues are clamped to `[0, 1]`; a spectrum dipping below
/// [`POSITIVITY_FLOOR`] is logged but the clamped value is still returned.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho)?;
    if eig.values[0] < POSITIVITY_FLOOR {
        log::warn!("positivity violated: minimum eigenvalue {:e}", eig.values[0]);
    }
    Ok(entropy_of_distribution(&eig.values))
}

/// Like [`von_neumann_entropy`] but fails on a positivity violation.
pub fn von_neumann_entropy_checked(rho: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho)?;
    if eig.values[0] < POSITIVITY_FLOOR {
        return Err(Error::PositivityViolation { min_eigenvalue: eig.values[0] });
    }
    Ok(entropy_of_distribution(&eig.values))
}

pub fn price_probabilities(rho: &ComplexMatrix) -> Vec<f64> {
    rho.diagonal().iter().map(|z| z.re).collect()
}

/// Shannon entropy of the price distribution `p_i = rho_ii`.
pub fn shannon_entropy_prices(rho: &ComplexMatrix) -> f64 {
    entropy_of_distribution(&price_probabilities(rho))
}

fn entropy_ratio_metric(s_vn: f64, s_shannon: f64) -> f64 {
    if s_shannon < SHANNON_FLOOR {
        return 0.0;
    }
    (1.0 - s_vn / s_shannon).clamp(0.0, 1.0)
}

/// `P_ent = 1 - S_vN / S_Shannon`: 0 for diagonal states, 1 for pure states
/// with spread prices. Defined as 0 when the price is fully determined.
pub fn precision_entropy_metric(rho: &ComplexMatrix) -> Result<f64> {
    Ok(entropy_ratio_metric(von_neumann_entropy(rho)?, shannon_entropy_prices(rho)))
}

/// Variance-based imprecision: the largest price variance found in any
/// eigenvector of `rho` (with non-negligible weight), relative to the price
/// variance of `rho` itself.
pub fn precision_variance_metric(rho: &ComplexMatrix, x: &PriceObservable) -> Result<f64> {
    let eig = hermitian_eigen(rho)?;
    let total = x.variance(rho);
    let best = (0..eig.values.len())
        .filter(|&k| eig.values[k] > EIGENVALUE_CUTOFF)
        .map(|k| x.variance_in_state(&eig.vector(k)))
        .fold(0.0, f64::max);
    if total < VARIANCE_FLOOR {
        if best < VARIANCE_FLOOR {
            return Ok(0.0);
        }
        return Err(Error::UndefinedMetric(format!(
            "state variance {total:e} vanishes but an eigenvector has variance {best:e}"
        )));
    }
    Ok(best / total)
}

/// The ratio `max_i Tr[X^2 rho_i] / Tr[X^2 rho]` over the spectral pieces
/// `rho_i = lambda_i |v_i><v_i|`. Unlike [`precision_variance_metric`] this
/// does not vanish on mixed diagonal states; kept for comparison.
pub fn precision_variance_metric_raw(rho: &ComplexMatrix, x: &PriceObservable) -> Result<f64> {
    let eig = hermitian_eigen(rho)?;
    let x2 = x.spectral_function(|v| v * v);
    let total = rho.trace_product(&x2).re;
    if total < VARIANCE_FLOOR {
        return Err(Error::UndefinedMetric(format!("second moment {total:e} vanishes")));
    }
    let best = (0..eig.values.len())
        .map(|k| {
            let piece = ComplexMatrix::outer(&eig.vector(k)).scale_real(eig.values[k]);
            piece.trace_product(&x2).re
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best / total)
}

/// Off-diagonal sums `eps_j = sum_i rho_(i, i+j)`, `j = 0..N-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSignature {
    pub dim: usize,
    pub sums: Vec<Complex64>,
    pub boundary_mode: BoundaryMode,
}

impl OrbitSignature {
    pub fn trace(&self) -> Complex64 {
        self.sums[0]
    }

    /// Largest `|eps_j|` over `j >= 1`.
    pub fn max_offdiagonal(&self) -> f64 {
        self.sums[1..].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Hard walls sum true superdiagonals; periodic mode wraps column indices
/// modulo `N`.
pub fn orbit_signature(rho: &ComplexMatrix, mode: BoundaryMode) -> OrbitSignature {
    let n = rho.dim();
    let sums = (0..n)
        .map(|j| match mode {
            BoundaryMode::HardWall => (1..=n - j).map(|i| rho.get(i, i + j)).sum(),
            BoundaryMode::Periodic => (1..=n).map(|i| rho.get(i, (i - 1 + j) % n + 1)).sum(),
        })
        .collect();
    OrbitSignature { dim: n, sums, boundary_mode: mode }
}

/// Sums below the diagonal, `sum_i rho_(i+j, i)`; the conjugates of the
/// signature for Hermitian states.
pub fn orbit_conjugate_sums(rho: &ComplexMatrix) -> Vec<Complex64> {
    let n = rho.dim();
    (0..n).map(|j| (1..=n - j).map(|i| rho.get(i + j, i)).sum()).collect()
}

/// A stationary point together with its smallest eigenvalue, which may be
/// negative for signatures that no physical state carries.
#[derive(Clone, Debug)]
pub struct StationaryPoint {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
}

/// The Toeplitz matrix `I/N + sum_j eps_j/(N-j)` on superdiagonal `j` (and
/// the conjugate on subdiagonal `j`).
pub fn toeplitz_stationary(signature: &OrbitSignature) -> Result<StationaryPoint> {
    let n = signature.dim;
    check_unit_trace(signature)?;
    let m = ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(1.0 / n as f64, 0.0)
        } else if j > i {
            signature.sums[j - i] / (n - (j - i)) as f64
        } else {
            (signature.sums[i - j] / (n - (i - j)) as f64).conj()
        }
    });
    stationary_point(m)
}

/// Periodic-mode stationary point: the circulant matrix with
/// `C_(i, i+j mod N) = eps_j / N`. Needs `eps_(N-j) = conj(eps_j)`.
pub fn circulant_stationary(signature: &OrbitSignature) -> Result<StationaryPoint> {
    let n = signature.dim;
    check_unit_trace(signature)?;
    for j in 1..n {
        if (signature.sums[n - j] - signature.sums[j].conj()).norm() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "wrapped signature is not Hermitian at j = {j}"
            )));
        }
    }
    let m = ComplexMatrix::from_fn(n, |i, j| signature.sums[(j + n - i) % n] / n as f64);
    stationary_point(m.hermitian_part())
}

fn check_unit_trace(signature: &OrbitSignature) -> Result<()> {
    if (signature.sums[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "signature eps_0 = {} must be 1",
            signature.sums[0]
        )));
    }
    Ok(())
}

fn stationary_point(matrix: ComplexMatrix) -> Result<StationaryPoint> {
    let min_eigenvalue = hermitian_eigen(&matrix)?.values[0];
    Ok(StationaryPoint { matrix, min_eigenvalue })
}

/// `||D_j|| = sum_i |rho_(i, i+j)|^2`.
pub fn offdiagonal_power(rho: &ComplexMatrix, j: usize) -> f64 {
    let n = rho.dim();
    if j >= n {
        return 0.0;
    }
    (1..=n - j).map(|i| rho.get(i, i + j).norm_sqr()).sum()
}

/// `mu_4 / mu_2^2 - 3` of the price distribution `p_i = rho_ii` over `x_i`.
pub fn excess_kurtosis(rho: &ComplexMatrix, x: &PriceObservable) -> Result<f64> {
    let p = price_probabilities(rho);
    let mean: f64 = p.iter().zip(&x.values).map(|(p, x)| p * x).sum();
    let (mut m2, mut m4) = (0.0, 0.0);
    for (p, x) in p.iter().zip(&x.values) {
        let d2 = (x - mean) * (x - mean);
        m2 += p * d2;
        m4 += p * d2 * d2;
    }
    if m2 < VARIANCE_FLOOR {
        return Err(Error::UndefinedMetric(format!("price variance {m2:e} vanishes")));
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

/// `||rho - I/N||_F`.
pub fn frobenius_distance_to_max_entropy(rho: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let uniform = Complex64::new(1.0 / n as f64, 0.0);
    let mut acc = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            let target = if i == j { uniform } else { ZERO };
            acc += (rho.get(i, j) - target).norm_sqr();
        }
    }
    acc.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractionReport {
    pub before: f64,
    pub after: f64,
    pub contracted: bool,
}

/// Distance to `stationary` before and after one Euler step from
/// `stationary + perturbation`.
pub fn contraction_check(
    stationary: &ComplexMatrix,
    perturbation: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    dt: f64,
) -> Result<ContractionReport> {
    stationary.check_same_dim(perturbation)?;
    let start = DensityMatrix::new(stationary + perturbation)?;
    start.check_positive()?;
    let before = frobenius_norm(perturbation);
    let image = euler_step(&start, coeffs, ops, dt)?;
    let after = frobenius_norm(&(image.matrix() - stationary));
    Ok(ContractionReport { before, after, contracted: after < before })
}

/// One row of a simulation time series.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub step: u64,
    pub time: f64,
    pub s_vn: f64,
    pub s_shannon: f64,
    pub p_ent: f64,
    /// `None` when the price distribution is degenerate.
    pub excess_kurtosis: Option<f64>,
    pub d2_power: f64,
    pub frob_to_maxent: f64,
    pub trace_error: f64,
    /// Only sampled on some records.
    pub min_eigenvalue: Option<f64>,
}

/// Evaluates every recorded metric; also returns the minimum eigenvalue,
/// which the eigendecomposition yields regardless of `with_min_eigenvalue`.
pub fn collect(
    step: u64,
    time: f64,
    rho: &ComplexMatrix,
    x: &PriceObservable,
    with_min_eigenvalue: bool,
) -> Result<(MetricsRecord, f64)> {
    let eig = hermitian_eigen(rho)?;
    let min_eig = eig.values[0];
    let s_vn = entropy_of_distribution(&eig.values);
    let s_shannon = shannon_entropy_prices(rho);
    let record = MetricsRecord {
        step,
        time,
        s_vn,
        s_shannon,
        p_ent: entropy_ratio_metric(s_vn, s_shannon),
        excess_kurtosis: excess_kurtosis(rho, x).ok(),
        d2_power: offdiagonal_power(rho, 2),
        frob_to_maxent: frobenius_distance_to_max_entropy(rho),
        trace_error: (rho.trace() - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue: with_min_eigenvalue.then_some(min_eig),
    };
    Ok((record, min_eig))
}
