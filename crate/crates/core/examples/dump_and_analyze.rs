//! Evolve a state, write it as a plain-text matrix dump, read it back and
//! recompute every metric.
//!
//! `cargo run --example dump_and_analyze`

use oqs_market::dynamics::euler_step;
use oqs_market::market::{gaussian_state, make_price_observable, make_shift_operators, BoundaryMode, LindbladCoefficients};
use oqs_market::scenario::{analyze, format_matrix_dump, parse_matrix_dump, write_atomic};

fn main() -> oqs_market::Result<()> {
    let n = 31;
    let x = make_price_observable(n, -1.0, 1.0)?;
    let ops = make_shift_operators(n, BoundaryMode::HardWall)?;
    let coeffs = LindbladCoefficients::from_rates(0.4, 0.36, 0.36);
    let mut rho = gaussian_state(&x.values, 0.05)?;
    for _ in 0..2500 {
        rho = euler_step(&rho, &coeffs, &ops, 0.004)?;
    }

    let path = std::env::temp_dir().join("oqs_market_state.txt");
    write_atomic(&path, &format_matrix_dump(rho.matrix()))?;
    let text = std::fs::read_to_string(&path)?;
    let back = parse_matrix_dump(&text)?;
    println!("wrote {} ({} bytes); round trip exact: {}", path.display(), text.len(), &back == rho.matrix());
    print!("{}", analyze(&back, &x)?);
    Ok(())
}
