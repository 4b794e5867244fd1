//! Market objects on `C^N`: price shift operators, price observables,
//! initial states and the dissipator coefficients derived from an
//! environment state.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, DensityMatrix, ONE, ZERO};

/// How the shift operators treat the ends of the price grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundaryMode {
    /// Nilpotent shifts: nothing moves above `f_N` or below `f_1`.
    #[default]
    HardWall,
    /// Cyclic shifts, `f_N -> f_1` and back.
    Periodic,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::HardWall => "hard-wall",
            BoundaryMode::Periodic => "periodic",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hard-wall" | "hardwall" | "hard_wall" => Ok(BoundaryMode::HardWall),
            "periodic" => Ok(BoundaryMode::Periodic),
            other => Err(Error::InvalidArgument(format!("unknown boundary mode `{other}`"))),
        }
    }
}

/// The up/down price shift operators `A_u`, `A_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSet {
    pub dim: usize,
    pub a_up: ComplexMatrix,
    pub a_down: ComplexMatrix,
    pub boundary_mode: BoundaryMode,
    /// True while the operators are the plain basis shifts, which lets the
    /// generator use index arithmetic instead of matrix products.
    shift_form: bool,
}

impl OperatorSet {
    pub fn is_shift_form(&self) -> bool {
        self.shift_form
    }

    /// `A -> U^dagger A U` for both operators.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<OperatorSet> {
        self.a_up.check_same_dim(u)?;
        let ud = u.adjoint();
        Ok(OperatorSet {
            dim: self.dim,
            a_up: &(&ud * &self.a_up) * u,
            a_down: &(&ud * &self.a_down) * u,
            boundary_mode: self.boundary_mode,
            shift_form: false,
        })
    }

    /// Same operators, forced onto the dense matrix-product path.
    pub fn as_dense(&self) -> OperatorSet {
        OperatorSet { shift_form: false, ..self.clone() }
    }
}

/// `A_u = sum_i |f_{i+1}><f_i|` (plus `|f_1><f_N|` when periodic) and
/// `A_d = A_u^dagger`.
pub fn make_shift_operators(n: usize, boundary_mode: BoundaryMode) -> Result<OperatorSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("shift operators need N >= 2, got {n}")));
    }
    let mut a_up = ComplexMatrix::zeros(n);
    for i in 1..n {
        a_up.set(i + 1, i, ONE);
    }
    if boundary_mode == BoundaryMode::Periodic {
        a_up.set(1, n, ONE);
    }
    let a_down = a_up.transpose();
    Ok(OperatorSet { dim: n, a_up, a_down, boundary_mode, shift_form: true })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ObservableKind {
    StandardDiagonal,
    Misaligned { epsilon: f64 },
}

/// A price observable `X = sum_i x_i |v_i><v_i|`.
///
/// For the misaligned kind the `|v_i>` are unit vectors but not mutually
/// orthogonal, so functions of the price are taken spectrally,
/// `f(X) = sum_i f(x_i) |v_i><v_i|`, rather than as matrix powers.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceObservable {
    pub values: Vec<f64>,
    /// Column `i` holds `|v_i>`.
    pub vectors: ComplexMatrix,
    pub matrix: ComplexMatrix,
    pub kind: ObservableKind,
}

impl PriceObservable {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `sum_i f(x_i) |v_i><v_i|`.
    pub fn spectral_function(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        match self.kind {
            ObservableKind::StandardDiagonal => {
                let d: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
                ComplexMatrix::from_real_diagonal(&d)
            }
            ObservableKind::Misaligned { .. } => build_spectral(&self.values, &self.vectors, f),
        }
    }

    /// `Tr[rho X]`.
    pub fn mean(&self, rho: &ComplexMatrix) -> f64 {
        rho.trace_product(&self.matrix).re
    }

    /// `Tr[rho X^2] - Tr[rho X]^2` with `X^2` taken spectrally.
    pub fn variance(&self, rho: &ComplexMatrix) -> f64 {
        let second = rho.trace_product(&self.spectral_function(|x| x * x)).re;
        let mean = self.mean(rho);
        second - mean * mean
    }

    /// Variance in the pure state `|psi>`.
    pub fn variance_in_state(&self, psi: &[Complex64]) -> f64 {
        self.variance(&ComplexMatrix::outer(psi))
    }
}

fn build_spectral(values: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n);
    for (k, &x) in values.iter().enumerate() {
        let w = f(x);
        if w == 0.0 {
            continue;
        }
        let col = k + 1;
        for i in 1..=n {
            let vi = vectors.get(i, col);
            if vi == ZERO {
                continue;
            }
            for j in 1..=n {
                let vj = vectors.get(j, col);
                if vj != ZERO {
                    let cur = m.get(i, j);
                    m.set(i, j, cur + vi * vj.conj() * w);
                }
            }
        }
    }
    m
}

/// Evenly spaced grid `x_1 = x_min, ..., x_N = x_max`.
pub fn price_grid(n: usize, x_min: f64, x_max: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("price grid needs N >= 2, got {n}")));
    }
    if !(x_min < x_max) {
        return Err(Error::InvalidArgument(format!("x_min {x_min} must be below x_max {x_max}")));
    }
    let span = x_max - x_min;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                x_max
            } else {
                x_min + span * k as f64 / (n - 1) as f64
            }
        })
        .collect())
}

/// The standard price operator `X = sum_i x_i |f_i><f_i|` on an even grid.
pub fn make_price_observable(n: usize, x_min: f64, x_max: f64) -> Result<PriceObservable> {
    let values = price_grid(n, x_min, x_max)?;
    Ok(PriceObservable {
        matrix: ComplexMatrix::from_real_diagonal(&values),
        vectors: ComplexMatrix::identity(n),
        values,
        kind: ObservableKind::StandardDiagonal,
    })
}

/// A price observable whose eigenvectors are blurred into their neighbours:
/// `|v_i> = eps |f_{i-1}> + sqrt(1 - 2 eps^2) |f_i> + eps |f_{i+1}>`.
///
/// At `i = 1` and `i = N` the missing neighbour is dropped and the vector
/// renormalized.
pub fn make_misaligned_observable(values: &[f64], epsilon: f64) -> Result<PriceObservable> {
    let n = values.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("misaligned observable needs N >= 3, got {n}")));
    }
    if !(0.0..=std::f64::consts::FRAC_1_SQRT_2).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} outside [0, 1/sqrt(2)]"
        )));
    }
    let centre = (1.0 - 2.0 * epsilon * epsilon).max(0.0).sqrt();
    let mut vectors = ComplexMatrix::zeros(n);
    for i in 1..=n {
        let mut entries = vec![(i, centre)];
        if i > 1 {
            entries.push((i - 1, epsilon));
        }
        if i < n {
            entries.push((i + 1, epsilon));
        }
        let norm = if i == 1 || i == n {
            entries.iter().map(|(_, a)| a * a).sum::<f64>().sqrt()
        } else {
            1.0
        };
        for (row, a) in entries {
            vectors.set(row, i, Complex64::new(a / norm, 0.0));
        }
    }
    let kind = if epsilon == 0.0 {
        ObservableKind::StandardDiagonal
    } else {
        ObservableKind::Misaligned { epsilon }
    };
    let matrix = if epsilon == 0.0 {
        ComplexMatrix::from_real_diagonal(values)
    } else {
        build_spectral(values, &vectors, |x| x)
    };
    Ok(PriceObservable { values: values.to_vec(), vectors, matrix, kind })
}

/// `|f_k><f_k|`, the state of a fully determined price.
pub fn dirac_state(n: usize, k: usize) -> Result<DensityMatrix> {
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { index: k, dim: n });
    }
    DensityMatrix::new(ComplexMatrix::unit(n, k, k))
}

/// Diagonal state with `p_i` proportional to the normal density
/// `exp(-x_i^2 / 2 sigma0^2) / sqrt(2 pi sigma0^2)`, renormalized to trace 1.
pub fn gaussian_state(values: &[f64], sigma0: f64) -> Result<DensityMatrix> {
    if !(sigma0 > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma0 must be positive, got {sigma0}")));
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma0 * sigma0).sqrt();
    let q2: Vec<f64> = values
        .iter()
        .map(|&x| norm * (-x * x / (2.0 * sigma0 * sigma0)).exp())
        .collect();
    let total: f64 = q2.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("gaussian weights underflow on this grid".into()));
    }
    let p: Vec<f64> = q2.iter().map(|w| w / total).collect();
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&p))
}

/// Static reduced state of the K-level risk-appetite environment.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentState {
    pub r: ComplexMatrix,
    pub kappa: f64,
}

impl EnvironmentState {
    pub fn new(r: ComplexMatrix, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::InvalidArgument(format!("kappa must be nonnegative, got {kappa}")));
        }
        let rho = DensityMatrix::new(r)?;
        rho.check_positive()?;
        Ok(Self { r: rho.into_matrix(), kappa })
    }

    /// `r = I / K`.
    pub fn maximum_entropy(levels: usize, kappa: f64) -> Result<Self> {
        Self::new(ComplexMatrix::identity(levels).scale_real(1.0 / levels as f64), kappa)
    }

    pub fn levels(&self) -> usize {
        self.r.dim()
    }
}

/// Dissipator coefficients `sigma^2`, `nu_u^2`, `nu_d^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladCoefficients {
    pub sigma2: f64,
    pub nu_u2: Complex64,
    pub nu_d2: Complex64,
}

impl LindbladCoefficients {
    /// From the rates `sigma`, `nu_u`, `nu_d` (squared here).
    pub fn from_rates(sigma: f64, nu_u: f64, nu_d: f64) -> Self {
        Self {
            sigma2: sigma * sigma,
            nu_u2: Complex64::new(nu_u * nu_u, 0.0),
            nu_d2: Complex64::new(nu_d * nu_d, 0.0),
        }
    }

    /// Pure diffusion, `nu_u = nu_d = 0`.
    pub fn classical(sigma: f64) -> Self {
        Self::from_rates(sigma, 0.0, 0.0)
    }

    pub fn is_classical(&self) -> bool {
        self.nu_u2 == ZERO && self.nu_d2 == ZERO
    }

    /// Same `sigma^2`, non-classical terms switched off.
    pub fn without_coherent_terms(&self) -> Self {
        Self { nu_u2: ZERO, nu_d2: ZERO, ..*self }
    }

    /// The Kossakowski matrix in the `(A_u, A_d)` frame,
    /// `[[sigma^2, nu_u^2], [nu_d^2, sigma^2]]`.
    pub fn kossakowski(&self) -> [[Complex64; 2]; 2] {
        let s = Complex64::new(self.sigma2, 0.0);
        [[s, self.nu_u2], [self.nu_d2, s]]
    }
}

fn level_raise(k: usize) -> ComplexMatrix {
    let mut b = ComplexMatrix::zeros(k);
    for i in 1..k {
        b.set(i + 1, i, ONE);
    }
    b
}

/// Coefficients induced by a static environment state.
///
/// Evaluated twice, from the closed-form sums over `r` and from traces
/// against the level-shift operators `B_u`, `B_d`; the two must agree.
pub fn environment_coefficients(env: &EnvironmentState) -> Result<LindbladCoefficients> {
    let k = env.levels();
    let r = &env.r;
    let kappa = env.kappa;

    let sigma2_sum: f64 = kappa * (1..k).map(|l| r.get(l, l).re).sum::<f64>();
    let nu_u2_sum: Complex64 =
        (1..=k.saturating_sub(2)).map(|l| r.get(l, l + 2)).sum::<Complex64>() * (2.0 * kappa);
    let nu_d2_sum: Complex64 =
        (1..=k.saturating_sub(2)).map(|l| r.get(l + 2, l)).sum::<Complex64>() * (2.0 * kappa);

    let b_up = level_raise(k);
    let b_down = b_up.adjoint();
    let sigma2_trace = (&b_down * &b_up).trace_product(r) * kappa;
    let nu_u2_trace = (&b_up * &b_up).trace_product(r) * (2.0 * kappa);
    let nu_d2_trace = (&b_down * &b_down).trace_product(r) * (2.0 * kappa);

    let checks = [
        ("sigma^2", Complex64::new(sigma2_sum, 0.0), sigma2_trace),
        ("nu_u^2", nu_u2_sum, nu_u2_trace),
        ("nu_d^2", nu_d2_sum, nu_d2_trace),
    ];
    for (name, closed, traced) in checks {
        if (closed - traced).norm() > 1e-12 {
            return Err(Error::InternalConsistency(format!(
                "{name}: closed form {closed} disagrees with trace form {traced}"
            )));
        }
    }
    Ok(LindbladCoefficients { sigma2: sigma2_sum, nu_u2: nu_u2_sum, nu_d2: nu_d2_sum })
}

/// Smallest eigenvalue of the environment state (positivity diagnostics).
pub fn environment_min_eigenvalue(env: &EnvironmentState) -> Result<f64> {
    Ok(hermitian_eigen(&env.r)?.values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_density_with, seeded_rng};

    #[test]
    fn hard_wall_n2_has_single_entry() {
        let ops = make_shift_operators(2, BoundaryMode::HardWall).unwrap();
        assert_eq!(ops.a_up.get(2, 1), ONE);
        assert_eq!(ops.a_up.to_row_major().iter().filter(|z| **z != ZERO).count(), 1);
    }

    #[test]
    fn hard_wall_products() {
        // A_u A_d annihilates |f_1> (nothing shifts down into f_N's image),
        // A_d A_u annihilates |f_N>.
        let ops = make_shift_operators(4, BoundaryMode::HardWall).unwrap();
        let ud = &ops.a_up * &ops.a_down;
        let du = &ops.a_down * &ops.a_up;
        assert_eq!(ud, ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 1.0, 1.0]));
        assert_eq!(du, ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn periodic_shifts_are_unitary() {
        let ops = make_shift_operators(4, BoundaryMode::Periodic).unwrap();
        let id = ComplexMatrix::identity(4);
        assert_eq!(&ops.a_up * &ops.a_down, id);
        assert_eq!(&ops.a_down * &ops.a_up, id);
    }

    #[test]
    fn a_down_is_adjoint_of_a_up() {
        for mode in [BoundaryMode::HardWall, BoundaryMode::Periodic] {
            let ops = make_shift_operators(6, mode).unwrap();
            assert_eq!(ops.a_down, ops.a_up.adjoint());
        }
    }

    #[test]
    fn shift_operators_reject_small_n() {
        assert!(make_shift_operators(1, BoundaryMode::HardWall).is_err());
    }

    #[test]
    fn price_grid_examples() {
        let x = make_price_observable(21, -1.0, 1.0).unwrap();
        for w in x.values.windows(2) {
            assert!((w[1] - w[0] - 0.1).abs() < 1e-15);
        }
        let x = make_price_observable(101, -1.0, 1.0).unwrap();
        assert_eq!(x.values[50], 0.0);
        assert_eq!(x.values[0], -1.0);
        assert_eq!(x.values[100], 1.0);
        let x = make_price_observable(2, 0.0, 1.0).unwrap();
        assert_eq!(x.values, vec![0.0, 1.0]);
        assert!(make_price_observable(5, 1.0, 1.0).is_err());
    }

    #[test]
    fn misaligned_epsilon_zero_is_standard() {
        let std_x = make_price_observable(21, -1.0, 1.0).unwrap();
        let mis = make_misaligned_observable(&std_x.values, 0.0).unwrap();
        assert_eq!(mis, std_x);
    }

    #[test]
    fn misaligned_vectors_are_unit_and_hermitian() {
        let x = make_price_observable(9, -1.0, 1.0).unwrap();
        let mis = make_misaligned_observable(&x.values, 0.2).unwrap();
        for col in 1..=9 {
            let norm: f64 = (1..=9).map(|i| mis.vectors.get(i, col).norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-15, "column {col}: {norm}");
        }
        assert!(mis.matrix.check_hermitian(0.0).is_ok());
        assert!(make_misaligned_observable(&x.values, 0.8).is_err());
        assert!(make_misaligned_observable(&x.values[..2], 0.1).is_err());
    }

    #[test]
    fn misaligned_variance_under_dirac() {
        let x = make_price_observable(21, -1.0, 1.0).unwrap();
        let mis = make_misaligned_observable(&x.values, 0.1).unwrap();
        let rho = dirac_state(21, 11).unwrap();
        let var = mis.variance(rho.matrix());
        assert!((var - 2e-4).abs() < 1e-14, "variance {var}");
    }

    #[test]
    fn dirac_examples() {
        let rho = dirac_state(3, 2).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::unit(3, 2, 2));
        assert_eq!(&(rho.matrix() * rho.matrix()), rho.matrix());
        assert!(matches!(dirac_state(3, 4), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(dirac_state(3, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn gaussian_state_properties() {
        let x = make_price_observable(101, -1.0, 1.0).unwrap();
        let rho = gaussian_state(&x.values, 0.05).unwrap();
        let p: Vec<f64> = rho.matrix().diagonal().iter().map(|z| z.re).collect();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for i in 0..101 {
            assert!((p[i] - p[100 - i]).abs() < 1e-15);
        }
        let mode = (0..101).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        assert_eq!(mode, 50);
        assert!(rho.matrix().is_exactly_diagonal());
        assert!(x.mean(rho.matrix()).abs() < 1e-12);
        assert!(gaussian_state(&x.values, 0.0).is_err());
    }

    #[test]
    fn maximum_entropy_environment() {
        let env = EnvironmentState::maximum_entropy(4, 1.0).unwrap();
        let c = environment_coefficients(&env).unwrap();
        assert!((c.sigma2 - 0.75).abs() < 1e-15);
        assert_eq!(c.nu_u2, ZERO);
        assert_eq!(c.nu_d2, ZERO);
    }

    #[test]
    fn two_level_environment_is_classical() {
        let mut rng = seeded_rng(3);
        let env = EnvironmentState::new(random_density_with(2, &mut rng), 0.7).unwrap();
        let c = environment_coefficients(&env).unwrap();
        assert!(c.is_classical());
    }

    #[test]
    fn random_environment_routes_agree() {
        for seed in 0..10 {
            let mut rng = seeded_rng(seed);
            let env = EnvironmentState::new(random_density_with(6, &mut rng), 1.3).unwrap();
            let c = environment_coefficients(&env).unwrap();
            assert!((c.nu_u2 - c.nu_d2.conj()).norm() < 1e-15);
            // brute-force closed forms
            let r = &env.r;
            let s: f64 = (1..=5).map(|l| r.get(l, l).re).sum::<f64>() * 1.3;
            let nu: Complex64 = (1..=4).map(|l| r.get(l, l + 2)).sum::<Complex64>() * 2.6;
            assert!((c.sigma2 - s).abs() < 1e-12);
            assert!((c.nu_u2 - nu).norm() < 1e-12);
        }
    }

    #[test]
    fn environment_rejects_invalid_states() {
        assert!(EnvironmentState::new(ComplexMatrix::identity(3), 1.0).is_err());
        let bad = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            EnvironmentState::new(bad, 1.0),
            Err(Error::PositivityViolation { .. })
        ));
    }
}
