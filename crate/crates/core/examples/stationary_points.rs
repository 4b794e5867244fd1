//! Conserved orbit sums, the stationary points they fix, and contraction
//! towards them.
//!
//! `cargo run --release --example stationary_points`

use oqs_market::linalg::random::{random_density_with, random_traceless_hermitian_with, seeded_rng};
use oqs_market::linalg::DensityMatrix;
use oqs_market::market::{make_shift_operators, BoundaryMode, LindbladCoefficients};
use oqs_market::metrics::{circulant_stationary, contraction_check, orbit_signature, toeplitz_stationary};
use oqs_market::dynamics::{apply_generator, euler_step};

fn main() -> oqs_market::Result<()> {
    let n = 8;
    let coeffs = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
    let mut rng = seeded_rng(3);

    let rho0 = DensityMatrix::new(random_density_with(n, &mut rng))?;
    let ops = make_shift_operators(n, BoundaryMode::Periodic)?;
    let sig = orbit_signature(rho0.matrix(), BoundaryMode::Periodic);
    let mut rho = rho0.clone();
    for _ in 0..2000 {
        rho = euler_step(&rho, &coeffs, &ops, 0.01)?;
    }
    let later = orbit_signature(rho.matrix(), BoundaryMode::Periodic);
    let drift = sig.sums.iter().zip(&later.sums).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("periodic, 2000 steps: largest change of any orbit sum {drift:.2e}");

    let circ = circulant_stationary(&sig)?;
    let residual = apply_generator(&circ.matrix, &coeffs, &ops)?.max_abs();
    println!("circulant point: |L(C)|_max = {residual:.2e}, min eigenvalue {:.4}", circ.min_eigenvalue);
    println!("distance of the evolved state to it: {:.3e}", (rho.matrix() - &circ.matrix).max_abs());

    let hard = make_shift_operators(n, BoundaryMode::HardWall)?;
    let toep = toeplitz_stationary(&orbit_signature(rho0.matrix(), BoundaryMode::HardWall))?;
    println!(
        "toeplitz point under hard walls: |L(T)|_max = {:.3e}, min eigenvalue {:.4}",
        apply_generator(&toep.matrix, &coeffs, &hard)?.max_abs(),
        toep.min_eigenvalue
    );

    let mut contracted = 0;
    for _ in 0..20 {
        let delta = random_traceless_hermitian_with(n, 1e-3, &mut rng);
        let r = contraction_check(&circ.matrix, &delta, &coeffs, &ops, 0.01)?;
        contracted += usize::from(r.contracted || (r.after - r.before).abs() < 1e-15);
    }
    println!("perturbations that did not move away from the circulant point: {contracted}/20");
    Ok(())
}
