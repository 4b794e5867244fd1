//! Entropy- and variance-based precision of a few reference states.
//!
//! `cargo run --example precision_metrics`

use num_complex::Complex64;
use oqs_market::linalg::random::{random_density_with, seeded_rng};
use oqs_market::linalg::ComplexMatrix;
use oqs_market::market::{dirac_state, gaussian_state, make_price_observable};
use oqs_market::metrics::{
    excess_kurtosis, frobenius_distance_to_max_entropy, precision_entropy_metric, precision_variance_metric,
    precision_variance_metric_raw, shannon_entropy_prices, von_neumann_entropy_checked,
};

fn main() -> oqs_market::Result<()> {
    let n = 41;
    let x = make_price_observable(n, -1.0, 1.0)?;
    let gaussian = gaussian_state(&x.values, 0.1)?.into_matrix();
    let packet = {
        let amp: Vec<f64> = gaussian.diagonal().iter().map(|z| z.re.sqrt()).collect();
        let psi: Vec<Complex64> = amp.iter().enumerate().map(|(k, a)| Complex64::from_polar(*a, 2.0 * k as f64)).collect();
        ComplexMatrix::outer(&psi)
    };
    let plane = {
        let psi: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0 / (n as f64).sqrt(), 0.7 * k as f64)).collect();
        ComplexMatrix::outer(&psi)
    };
    let states = [
        ("dirac(21)", dirac_state(n, 21)?.into_matrix()),
        ("gaussian(0.1)", gaussian),
        ("gaussian packet", packet),
        ("plane wave", plane),
        ("random mixed", random_density_with(n, &mut seeded_rng(9))),
        ("maximally mixed", ComplexMatrix::identity(n).scale_real(1.0 / n as f64)),
    ];

    println!(
        "{:<18} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>8}",
        "state", "s_vn", "s_shan", "p_ent", "p_var", "p_raw", "kurtosis", "frob"
    );
    let show = |v: oqs_market::Result<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_else(|_| "-".into());
    for (name, rho) in &states {
        println!(
            "{:<18} {:>8.4} {:>8.4} {:>8.4} {:>8} {:>8} {:>9} {:>8.4}",
            name,
            von_neumann_entropy_checked(rho)?,
            shannon_entropy_prices(rho),
            precision_entropy_metric(rho)?,
            show(precision_variance_metric(rho, &x)),
            show(precision_variance_metric_raw(rho, &x)),
            show(excess_kurtosis(rho, &x)),
            frobenius_distance_to_max_entropy(rho),
        );
    }
    Ok(())
}
