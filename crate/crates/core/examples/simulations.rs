//! The two reference runs: 5000 non-classical steps, then 95000 steps that
//! stay non-classical (sim 1) or switch to pure diffusion (sim 2).
//!
//! Build with `--release`; the full length takes under a minute per run.
//! A divisor shortens both segments, e.g.
//! `cargo run --release --example simulations -- 10`.

use std::path::Path;

use oqs_market::scenario::{run_scenario, write_run_outputs, ScenarioConfig};

fn main() -> oqs_market::Result<()> {
    let divisor: u64 = std::env::args().nth(1).map_or(1, |a| a.parse().expect("divisor must be an integer"));
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out_dir = std::env::temp_dir().join("oqs_market_simulations");

    let runs: Vec<_> = ["sim1", "sim2"]
        .iter()
        .map(|name| {
            let mut cfg = ScenarioConfig::load(&root.join("configs").join(format!("{name}.cfg")))?;
            for seg in &mut cfg.segments {
                seg.0 = (seg.0 / divisor).max(1);
            }
            cfg.record_stride = (cfg.record_stride / divisor).max(1);
            Ok((name, cfg))
        })
        .collect::<oqs_market::Result<_>>()?;

    let results = std::thread::scope(|s| {
        let handles: Vec<_> = runs.iter().map(|(_, cfg)| s.spawn(|| run_scenario(cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("run panicked")).collect::<Vec<_>>()
    });

    let mut series = Vec::new();
    for ((name, _), result) in runs.iter().zip(results) {
        let (records, summary) = result?;
        let (csv, dump) = write_run_outputs(&out_dir.join(format!("{name}.csv")), &records, &summary)?;
        println!("# {name}: {} and {}", csv.display(), dump.display());
        print!("{summary}");
        series.push(records);
    }

    let (a, b) = (&series[0], &series[1]);
    let shared = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    println!("identical leading rows: {shared}");
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "step", "svn_1", "svn_2", "d2_1", "d2_2");
    let every = (a.len() / 12).max(1);
    for (x, y) in a.iter().zip(b).step_by(every) {
        println!("{:>8} {:>10.6} {:>10.6} {:>10.3e} {:>10.3e}", x.step, x.s_vn, y.s_vn, x.d2_power, y.d2_power);
    }
    Ok(())
}
