//! Diagonal (standard) form of the dissipator, positivity of the coefficient
//! matrix, and which parameter choices give a classical evolution.
//!
//! `cargo run --example gksl_form`

use oqs_market::dynamics::{apply_generator, gksl_standard_form, is_classical_evolution, is_completely_positive};
use oqs_market::linalg::random::{random_density_with, seeded_rng};
use oqs_market::market::{make_shift_operators, BoundaryMode, LindbladCoefficients};

fn main() -> oqs_market::Result<()> {
    let ops = make_shift_operators(9, BoundaryMode::HardWall)?;
    let rho = random_density_with(9, &mut seeded_rng(1));

    for (sigma, nu) in [(0.4, 0.0), (0.4, 0.2), (0.4, 0.36), (0.4, 0.5)] {
        let coeffs = LindbladCoefficients::from_rates(sigma, nu, nu);
        let cp = is_completely_positive(&coeffs);
        let form = gksl_standard_form(&coeffs, &ops)?;
        let mismatch = (&form.dissipator(&rho) - &apply_generator(&rho, &coeffs, &ops)?).max_abs();
        println!("sigma = {sigma}, nu = {nu}");
        println!(
            "  kossakowski eigenvalues {:.4} {:.4}",
            cp.kossakowski_eigenvalues[0].re, cp.kossakowski_eigenvalues[1].re
        );
        println!("  nu_u^2 + nu_d^2 = {:.4} <= sigma^2: {}", cp.coherent_weight, cp.completely_positive);
        println!("  theta = {:.4}, rates = {:.4}, {:.4}", form.theta, form.rates[0], form.rates[1]);
        println!("  classical jump operators: {}", is_classical_evolution(&form));
        println!("  |standard form - generator|_max = {mismatch:.2e}");
    }

    let asymmetric = LindbladCoefficients::from_rates(0.4, 0.3, 0.1);
    match gksl_standard_form(&asymmetric, &ops) {
        Ok(_) => println!("asymmetric rates diagonalised"),
        Err(e) => println!("asymmetric rates: {e}"),
    }
    Ok(())
}
