//! Dissipator coefficients induced by a static risk-appetite environment.
//!
//! `cargo run --example environment`

use num_complex::Complex64;
use oqs_market::linalg::ComplexMatrix;
use oqs_market::market::{environment_coefficients, environment_min_eigenvalue, EnvironmentState};

fn main() -> oqs_market::Result<()> {
    let levels = 5;
    let kappa = 0.1;

    let flat = EnvironmentState::maximum_entropy(levels, kappa)?;
    let skewed = {
        let weights = [0.35, 0.25, 0.2, 0.12, 0.08];
        let mut r = ComplexMatrix::from_real_diagonal(&weights);
        for (offset, c) in [(1, Complex64::new(0.04, 0.01)), (2, Complex64::new(0.03, 0.0))] {
            for i in 1..=levels - offset {
                r.set(i, i + offset, c);
                r.set(i + offset, i, c.conj());
            }
        }
        EnvironmentState::new(r, kappa)?
    };

    for (name, env) in [("maximum entropy", &flat), ("skewed, coherent", &skewed)] {
        let c = environment_coefficients(env)?;
        println!("{name} (K = {}, kappa = {kappa})", env.levels());
        println!("  min eigenvalue of r = {:.4}", environment_min_eigenvalue(env)?);
        println!("  sigma^2 = {:.6}", c.sigma2);
        println!("  nu_u^2  = {:.6}", c.nu_u2);
        println!("  nu_d^2  = {:.6}", c.nu_d2);
        println!("  classical: {}", c.is_classical());
    }
    Ok(())
}
