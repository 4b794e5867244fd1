//! Schrodinger and Heisenberg pictures give the same expectation values.
//!
//! `cargo run --example heisenberg_duality`

use oqs_market::dynamics::{euler_step, heisenberg_step};
use oqs_market::linalg::haar_random_unitary;
use oqs_market::market::{gaussian_state, make_price_observable, make_shift_operators, BoundaryMode, LindbladCoefficients};

fn main() -> oqs_market::Result<()> {
    let n = 15;
    let x = make_price_observable(n, -1.0, 1.0)?;
    let coeffs = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
    let dt = 0.01;

    for (label, ops) in [
        ("basis shifts", make_shift_operators(n, BoundaryMode::HardWall)?),
        ("conjugated shifts", make_shift_operators(n, BoundaryMode::HardWall)?.conjugated_by(&haar_random_unitary(n, 5))?),
    ] {
        let mut rho = gaussian_state(&x.values, 0.15)?;
        let rho0 = rho.clone();
        let mut f = x.matrix.clone();
        let mut f2 = &x.matrix * &x.matrix;
        println!("{label}");
        println!("{:>6} {:>14} {:>14} {:>10}", "step", "<x> forward", "<x> backward", "gap");
        for step in 1..=400 {
            rho = euler_step(&rho, &coeffs, &ops, dt)?;
            f = heisenberg_step(&f, &coeffs, &ops, dt)?;
            f2 = heisenberg_step(&f2, &coeffs, &ops, dt)?;
            if step % 100 == 0 {
                let forward = rho.matrix().trace_product(&x.matrix).re;
                let backward = rho0.matrix().trace_product(&f).re;
                println!("{step:>6} {forward:>14.10} {backward:>14.10} {:>10.1e}", (forward - backward).abs());
            }
        }
        let second = rho0.matrix().trace_product(&f2).re - rho.matrix().trace_product(&(&x.matrix * &x.matrix)).re;
        println!("  <x^2> gap after 400 steps: {:.1e}", second.abs());
    }
    Ok(())
}
