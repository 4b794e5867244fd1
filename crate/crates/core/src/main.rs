use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oqs_market::market::{make_price_observable, LindbladCoefficients};
use oqs_market::scenario::{
    analyze, format_matrix_dump, one_step_report, oracle_check, parse_matrix_dump, run_scenario, to_csv,
    write_atomic, write_run_outputs, ScenarioConfig,
};
use oqs_market::{Error, Result};

/// Lindblad market simulator.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Overrides the seed in every config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and write their CSV time series (concurrently when
    /// several configs are given).
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// CSV path for a single config without `output_path`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump the density matrix after a single step.
    OneStep {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Euler-vs-exact convergence table.
    Oracle {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.005,0.0025,0.00125")]
        dts: Vec<f64>,
        #[arg(long, default_value_t = 0.4)]
        sigma: f64,
        #[arg(long, default_value_t = 0.2)]
        nu: f64,
    },
    /// Recompute every metric on a dumped state.
    Analyze {
        dump: PathBuf,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x_max: f64,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::load(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    Ok(config)
}

fn run_one(path: &Path, seed: Option<u64>, output: Option<&PathBuf>) -> Result<()> {
    let config = load(path, seed)?;
    let (records, summary) = run_scenario(&config)?;
    match output.or(config.output_path.as_ref()) {
        Some(csv) => {
            let (csv, dump) = write_run_outputs(csv, &records, &summary)?;
            log::info!("{}: wrote {} and {}", path.display(), csv.display(), dump.display());
        }
        None => print!("{}", to_csv(&records)),
    }
    eprint!("# {}\n{summary}", path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { configs, output } => {
            if output.is_some() && configs.len() > 1 {
                return Err(Error::InvalidArgument("--output needs a single config".into()));
            }
            let results: Vec<Result<()>> = std::thread::scope(|s| {
                let handles: Vec<_> = configs
                    .iter()
                    .map(|c| s.spawn(|| run_one(c, cli.seed, output.as_ref())))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
            });
            results.into_iter().collect()
        }
        Command::OneStep { config, output } => {
            let state = one_step_report(&load(&config, cli.seed)?)?;
            let dump = format_matrix_dump(state.matrix());
            match output {
                Some(p) => write_atomic(&p, &dump),
                None => {
                    print!("{dump}");
                    Ok(())
                }
            }
        }
        Command::Oracle { n, t, dts, sigma, nu } => {
            let report = oracle_check(n, &LindbladCoefficients::from_rates(sigma, nu, nu), t, &dts)?;
            print!("{report}");
            Ok(())
        }
        Command::Analyze { dump, x_min, x_max } => {
            let text = std::fs::read_to_string(&dump).map_err(|e| Error::Io(format!("{}: {e}", dump.display())))?;
            let rho = parse_matrix_dump(&text)?;
            let x = make_price_observable(rho.dim(), x_min, x_max)?;
            print!("{}", analyze(&rho, &x)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
