//! Seeded random matrices and states.
//!
//! Everything here takes either a seed or an explicit generator; there is no
//! global RNG state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts each N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary of size `dim`, deterministic in `seed`.
pub fn haar_random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_random_unitary_with(dim, &mut seeded_rng(seed))
}

/// QR of a complex Ginibre matrix with the phases of `R`'s diagonal folded
/// back into `Q`, which makes the distribution exactly Haar.
pub fn haar_random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "dimension must be at least 1");
    let z = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() }
        })
        .collect();
    ComplexMatrix::from_nalgebra(DMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j]))
}

/// Hermitian matrix with Gaussian entries (GUE up to scale).
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    random_hermitian_with(dim, &mut seeded_rng(seed))
}

pub fn random_hermitian_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 1..=dim {
        let d: f64 = rng.sample(StandardNormal);
        m.set(i, i, Complex64::new(d, 0.0));
        for j in (i + 1)..=dim {
            let z = complex_gaussian(rng);
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Unit vector drawn uniformly from the complex sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Probability vector with i.i.d. exponential weights, normalized.
pub fn random_probabilities<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Random positive semidefinite, unit-trace matrix `G G^dagger / Tr`.
pub fn random_density_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng));
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Random Hermitian, traceless matrix scaled to the given Frobenius norm.
pub fn random_traceless_hermitian_with<R: Rng + ?Sized>(
    dim: usize,
    frobenius: f64,
    rng: &mut R,
) -> ComplexMatrix {
    let mut m = random_hermitian_with(dim, rng);
    let shift = m.trace().re / dim as f64;
    for i in 1..=dim {
        let v = m.get(i, i) - shift;
        m.set(i, i, v);
    }
    let norm = super::frobenius_norm(&m);
    if norm == 0.0 {
        return ComplexMatrix::zeros(dim);
    }
    m.scale_real(frobenius / norm)
}
