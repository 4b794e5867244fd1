//! Explicit Euler against the matrix exponential of the full superoperator.
//!
//! `cargo run --release --example oracle_convergence`

use oqs_market::linalg::haar_random_unitary;
use oqs_market::market::{dirac_state, make_shift_operators, BoundaryMode, LindbladCoefficients};
use oqs_market::scenario::{oracle_check, oracle_check_from};

fn main() -> oqs_market::Result<()> {
    let dts = [0.01, 0.005, 0.0025, 0.00125];
    let coeffs = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);

    println!("N = 5, hard walls, centred Dirac start, t = 1");
    print!("{}", oracle_check(5, &coeffs, 1.0, &dts)?);

    println!("\nN = 6, periodic, conjugated shifts, t = 0.5");
    let ops = make_shift_operators(6, BoundaryMode::Periodic)?.conjugated_by(&haar_random_unitary(6, 11))?;
    let report = oracle_check_from(&dirac_state(6, 2)?, &coeffs, &ops, 0.5, &dts)?;
    print!("{report}");
    Ok(())
}
