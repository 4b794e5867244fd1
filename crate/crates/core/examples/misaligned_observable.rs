//! A price observable whose eigenbasis is tilted away from the shift basis.
//!
//! `cargo run --example misaligned_observable`

use oqs_market::market::{dirac_state, make_misaligned_observable, make_price_observable};
use oqs_market::metrics::precision_variance_metric;

fn main() -> oqs_market::Result<()> {
    let n = 21;
    let standard = make_price_observable(n, -1.0, 1.0)?;
    let dx = standard.values[1] - standard.values[0];
    let sharp = dirac_state(n, 11)?;

    println!("{:>6} {:>12} {:>12} {:>8}", "eps", "variance", "2 eps^2 dx^2", "p_var");
    for eps in [0.0, 0.05, 0.1, 0.2, 0.4, 0.6] {
        let x = make_misaligned_observable(&standard.values, eps)?;
        println!(
            "{eps:>6} {:>12.4e} {:>12.4e} {:>8.4}",
            x.variance(sharp.matrix()),
            2.0 * eps * eps * dx * dx,
            precision_variance_metric(sharp.matrix(), &x)?
        );
    }
    Ok(())
}
