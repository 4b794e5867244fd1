//! One Euler step from a sharp price, with plain and Haar-conjugated shifts.
//!
//! `cargo run --example one_step`

use oqs_market::market::{dirac_state, BoundaryMode};
use oqs_market::scenario::{one_step_report, InitialState, ScenarioConfig, SegmentMode};

fn config(type2: bool) -> ScenarioConfig {
    ScenarioConfig {
        n: 21,
        x_min: -1.0,
        x_max: 1.0,
        dt: 0.01,
        sigma: 0.4,
        nu_u: 0.36,
        nu_d: 0.36,
        segments: vec![(1, SegmentMode::Nonclassical)],
        initial: InitialState::Dirac(11),
        boundary_mode: BoundaryMode::HardWall,
        record_stride: 1,
        seed: 2024,
        type2_conjugation: type2,
        output_path: None,
    }
}

fn main() -> oqs_market::Result<()> {
    let start = dirac_state(21, 11)?;
    for type2 in [false, true] {
        let cfg = config(type2);
        let rho = one_step_report(&cfg)?;
        println!("{}", if type2 { "type II (conjugated shifts)" } else { "type I (basis shifts)" });
        println!("  window rows/cols 9..=13, |rho_ij|:");
        for i in 9..=13 {
            let row: Vec<String> = (9..=13).map(|j| format!("{:9.2e}", rho.get(i, j).norm())).collect();
            println!("    {}", row.join(" "));
        }
        let spread = (1..=21)
            .flat_map(|i| (1..=21).map(move |j| (i, j)))
            .filter(|&(i, j)| (i as isize - 11).abs() > 2 || (j as isize - 11).abs() > 2)
            .map(|(i, j)| (rho.get(i, j) - start.get(i, j)).norm())
            .fold(0.0, f64::max);
        println!("  largest change outside the 5x5 centre block: {spread:.3e}");
        println!("  trace error {:.1e}, min eigenvalue {:.4e}", rho.trace_error(), rho.min_eigenvalue()?);
    }
    Ok(())
}
