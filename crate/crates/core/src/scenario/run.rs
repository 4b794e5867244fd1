//! Scenario drivers behind the command-line subcommands.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::dynamics::{
    euler_step, euler_step_raw, is_completely_positive, simulate, CpReport, ExactPropagator, HEALTH_LIMIT,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, DensityMatrix};
use crate::market::{dirac_state, make_shift_operators, BoundaryMode, LindbladCoefficients, OperatorSet, PriceObservable};
use crate::metrics::{self, MetricsRecord};

use super::config::ScenarioConfig;
use super::output::{format_matrix_dump, to_csv, write_atomic};

/// A segment whose coefficients fail the complete-positivity inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpWarning {
    /// 1-based segment index.
    pub segment: usize,
    pub report: CpReport,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub total_steps: u64,
    pub final_state: DensityMatrix,
    pub segment_wall_time: Vec<Duration>,
    pub cp_warnings: Vec<CpWarning>,
    pub positivity_dips: usize,
    pub max_trace_error: f64,
    pub max_hermiticity_defect: f64,
    /// Step of the largest recorded `d2_power`.
    pub d2_peak_step: Option<u64>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total_steps = {}", self.total_steps)?;
        for (k, t) in self.segment_wall_time.iter().enumerate() {
            writeln!(f, "segment_{}_wall_seconds = {:.3}", k + 1, t.as_secs_f64())?;
        }
        for w in &self.cp_warnings {
            writeln!(
                f,
                "cp_warning = segment {} (nu_u^2 + nu_d^2 = {} > sigma^2)",
                w.segment, w.report.coherent_weight
            )?;
        }
        writeln!(f, "positivity_dips = {}", self.positivity_dips)?;
        writeln!(f, "max_trace_error = {:e}", self.max_trace_error)?;
        writeln!(f, "max_hermiticity_defect = {:e}", self.max_hermiticity_defect)?;
        match self.d2_peak_step {
            Some(s) => writeln!(f, "d2_peak_step = {s}"),
            None => writeln!(f, "d2_peak_step ="),
        }
    }
}

/// Runs every segment of `config` and returns the recorded rows.
pub fn run_scenario(config: &ScenarioConfig) -> Result<(Vec<MetricsRecord>, RunSummary)> {
    let schedule = config.schedule()?;
    let mut cp_warnings = Vec::new();
    for (k, segment) in schedule.segments.iter().enumerate() {
        let report = is_completely_positive(&segment.coefficients);
        if !report.completely_positive {
            log::warn!(
                "segment {}: nu_u^2 + nu_d^2 = {} exceeds sigma^2 = {}; complete positivity is not guaranteed",
                k + 1,
                report.coherent_weight,
                segment.coefficients.sigma2
            );
            cp_warnings.push(CpWarning { segment: k + 1, report });
        }
    }
    let ops = config.operators()?;
    let x = config.observable()?;
    let rho0 = config.initial_state()?;
    let traj = simulate(&rho0, &schedule, &ops, &x, config.record_stride)?;

    let d2_peak_step = traj
        .records
        .iter()
        .fold(None::<&MetricsRecord>, |best, r| match best {
            Some(b) if b.d2_power >= r.d2_power => Some(b),
            _ => Some(r),
        })
        .map(|r| r.step);
    let summary = RunSummary {
        total_steps: schedule.total_steps(),
        final_state: traj.final_state,
        segment_wall_time: traj.segment_wall_time,
        cp_warnings,
        positivity_dips: traj.positivity_dips,
        max_trace_error: traj.records.iter().map(|r| r.trace_error).fold(0.0, f64::max),
        max_hermiticity_defect: traj.max_hermiticity_defect,
        d2_peak_step,
    };
    Ok((traj.records, summary))
}

/// Path of the final-state dump that accompanies the CSV at `csv_path`.
pub fn final_state_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("final_state.txt")
}

/// Writes the CSV and the final-state dump; returns their paths.
pub fn write_run_outputs(
    csv_path: &Path,
    records: &[MetricsRecord],
    summary: &RunSummary,
) -> Result<(PathBuf, PathBuf)> {
    write_atomic(csv_path, &to_csv(records))?;
    let dump = final_state_path(csv_path);
    write_atomic(&dump, &format_matrix_dump(summary.final_state.matrix()))?;
    Ok((csv_path.to_path_buf(), dump))
}

/// The state after the single configured step.
pub fn one_step_report(config: &ScenarioConfig) -> Result<DensityMatrix> {
    if config.segments.len() != 1 || config.segments[0].0 != 1 {
        return Err(Error::InvalidArgument(format!(
            "one-step report needs exactly one segment of one step, got {:?}",
            config.segments
        )));
    }
    let coeffs = config.coefficients(config.segments[0].1);
    let (next, defect) = euler_step_raw(config.initial_state()?.matrix(), &coeffs, &config.operators()?, config.dt)?;
    if defect > HEALTH_LIMIT {
        return Err(Error::HealthCheck { step: 1, reason: format!("Hermiticity drift {defect:e}") });
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub steps: u64,
    /// Largest entry of `|rho_Euler(t) - rho_exact(t)|`.
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub t: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// `error(dt_(k-1)) / error(dt_k)`; `None` where an error vanishes.
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.rows
            .windows(2)
            .map(|w| (w[1].max_error > 0.0).then(|| w[0].max_error / w[1].max_error))
            .collect()
    }

    /// Empirical order `log(ratio) / log(dt_(k-1) / dt_k)`.
    pub fn orders(&self) -> Vec<Option<f64>> {
        self.rows
            .windows(2)
            .zip(self.ratios())
            .map(|(w, r)| r.map(|r| r.ln() / (w[0].dt / w[1].dt).ln()))
            .collect()
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dt,steps,max_error,ratio,order")?;
        let ratios = self.ratios();
        let orders = self.orders();
        for (k, row) in self.rows.iter().enumerate() {
            let (ratio, order) = if k == 0 {
                (String::new(), String::new())
            } else {
                let show = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_default();
                (show(ratios[k - 1]), show(orders[k - 1]))
            };
            writeln!(f, "{:e},{},{:e},{ratio},{order}", row.dt, row.steps, row.max_error)?;
        }
        Ok(())
    }
}

/// Euler against the exact propagator from a centred Dirac state with hard
/// walls.
pub fn oracle_check(n: usize, coeffs: &LindbladCoefficients, t: f64, dts: &[f64]) -> Result<ConvergenceReport> {
    let ops = make_shift_operators(n, BoundaryMode::HardWall)?;
    oracle_check_from(&dirac_state(n, n.div_ceil(2))?, coeffs, &ops, t, dts)
}

/// Euler against the exact propagator for an arbitrary start and operators.
pub fn oracle_check_from(
    rho0: &DensityMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    t: f64,
    dts: &[f64],
) -> Result<ConvergenceReport> {
    let exact = ExactPropagator::new(coeffs, ops, t)?.apply(rho0);
    let mut rows = Vec::with_capacity(dts.len());
    for &dt in dts {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let steps = (t / dt).round();
        if (steps * dt - t).abs() > 1e-9 * t.max(dt) {
            return Err(Error::InvalidArgument(format!("t = {t} is not a multiple of dt = {dt}")));
        }
        let mut rho = rho0.clone();
        for _ in 0..steps as u64 {
            rho = euler_step(&rho, coeffs, ops, dt)?;
        }
        rows.push(ConvergenceRow { dt, steps: steps as u64, max_error: (rho.matrix() - exact.matrix()).max_abs() });
    }
    Ok(ConvergenceReport { t, rows })
}

/// Every metric evaluated on one state.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub dim: usize,
    pub trace_error: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub s_vn: f64,
    pub s_shannon: f64,
    pub p_ent: f64,
    pub p_var: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub d2_power: f64,
    pub frob_to_maxent: f64,
    /// Largest `|eps_j|`, `j >= 1`, of the hard-wall orbit signature.
    pub max_orbit_sum: f64,
}

pub fn analyze(rho: &ComplexMatrix, x: &PriceObservable) -> Result<AnalysisReport> {
    rho.check_same_dim(&x.matrix)?;
    let (record, min_eigenvalue) = metrics::collect(0, 0.0, rho, x, true)?;
    let p_var = match metrics::precision_variance_metric(rho, x) {
        Ok(v) => Some(v),
        Err(Error::UndefinedMetric(_)) => None,
        Err(e) => return Err(e),
    };
    debug_assert_eq!(hermitian_eigen(rho)?.values[0], min_eigenvalue);
    Ok(AnalysisReport {
        dim: rho.dim(),
        trace_error: record.trace_error,
        hermiticity_defect: rho.hermiticity_defect().2,
        min_eigenvalue,
        s_vn: record.s_vn,
        s_shannon: record.s_shannon,
        p_ent: record.p_ent,
        p_var,
        excess_kurtosis: record.excess_kurtosis,
        d2_power: record.d2_power,
        frob_to_maxent: record.frob_to_maxent,
        max_orbit_sum: metrics::orbit_signature(rho, BoundaryMode::HardWall).max_offdiagonal(),
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_else(|| "undefined".into());
        writeln!(f, "dim = {}", self.dim)?;
        writeln!(f, "trace_error = {:e}", self.trace_error)?;
        writeln!(f, "hermiticity_defect = {:e}", self.hermiticity_defect)?;
        writeln!(f, "min_eigenvalue = {:e}", self.min_eigenvalue)?;
        writeln!(f, "s_vn = {:e}", self.s_vn)?;
        writeln!(f, "s_shannon = {:e}", self.s_shannon)?;
        writeln!(f, "p_ent = {:e}", self.p_ent)?;
        writeln!(f, "p_var = {}", opt(self.p_var))?;
        writeln!(f, "excess_kurtosis = {}", opt(self.excess_kurtosis))?;
        writeln!(f, "d2_power = {:e}", self.d2_power)?;
        writeln!(f, "frob_to_maxent = {:e}", self.frob_to_maxent)?;
        writeln!(f, "max_orbit_sum = {:e}", self.max_orbit_sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::config::parse_config;
    use crate::scenario::output::CSV_HEADER;

    fn one_step_text(type2: bool, nu: f64) -> String {
        format!(
            "n = 21\nx_min = -1\nx_max = 1\ndt = 0.01\nsigma = 0.4\nnu_u = {nu}\nnu_d = {nu}\n\
             segments = 1:nonclassical\ninitial = dirac(11)\nseed = 7\ntype2_conjugation = {type2}\n"
        )
    }

    fn max_off_centre(m: &ComplexMatrix) -> f64 {
        let mut best: f64 = 0.0;
        for i in 1..=m.dim() {
            for j in 1..=m.dim() {
                if (i, j) != (11, 11) {
                    best = best.max(m.get(i, j).norm());
                }
            }
        }
        best
    }

    #[test]
    fn one_step_type_one_and_two() {
        let type1 = one_step_report(&parse_config(&one_step_text(false, 0.36)).unwrap()).unwrap();
        assert!((type1.get(11, 11).re - 0.9968).abs() < 1e-15);
        let type2 = one_step_report(&parse_config(&one_step_text(true, 0.36)).unwrap()).unwrap();
        assert!(type2.trace_error() < 1e-12);
        assert!(max_off_centre(type2.matrix()) < max_off_centre(type1.matrix()));
        let classical = one_step_report(&parse_config(&one_step_text(false, 0.0)).unwrap()).unwrap();
        assert!(classical.matrix().is_exactly_diagonal());
    }

    #[test]
    fn one_step_rejects_longer_runs() {
        let text = one_step_text(false, 0.36).replace("1:nonclassical", "2:nonclassical");
        assert!(one_step_report(&parse_config(&text).unwrap()).is_err());
    }

    #[test]
    fn zero_segment_run_is_header_only() {
        let text = one_step_text(false, 0.36).replace("1:nonclassical", "");
        let (records, summary) = run_scenario(&parse_config(&text).unwrap()).unwrap();
        assert!(records.is_empty());
        assert_eq!(summary.total_steps, 0);
        assert_eq!(summary.d2_peak_step, None);
        assert_eq!(to_csv(&records), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn cp_warning_on_strong_coherence() {
        let text = one_step_text(false, 0.36).replace("1:nonclassical", "3:nonclassical, 2:classical");
        let (_, summary) = run_scenario(&parse_config(&text).unwrap()).unwrap();
        assert_eq!(summary.cp_warnings.len(), 1);
        assert_eq!(summary.cp_warnings[0].segment, 1);
        let text = one_step_text(false, 0.2).replace("1:nonclassical", "3:nonclassical");
        assert!(run_scenario(&parse_config(&text).unwrap()).unwrap().1.cp_warnings.is_empty());
    }

    #[test]
    fn oracle_examples() {
        let c = LindbladCoefficients::from_rates(0.4, 0.2, 0.2);
        let report = oracle_check(5, &c, 1.0, &[0.01, 0.005]).unwrap();
        let ratio = report.ratios()[0].unwrap();
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
        assert!((report.orders()[0].unwrap() - 1.0).abs() < 0.15);

        let zero = oracle_check(5, &c, 0.0, &[0.01, 0.005]).unwrap();
        assert!(zero.rows.iter().all(|r| r.max_error == 0.0 && r.steps == 0));

        let ops = make_shift_operators(5, BoundaryMode::Periodic).unwrap();
        let uniform = DensityMatrix::new(ComplexMatrix::identity(5).scale_real(0.2)).unwrap();
        let flat = oracle_check_from(&uniform, &c, &ops, 1.0, &[0.1, 0.05]).unwrap();
        assert!(flat.rows.iter().all(|r| r.max_error < 1e-12));

        assert!(oracle_check(5, &c, 1.0, &[0.3]).is_err());
        assert!(oracle_check(13, &c, 1.0, &[0.1]).is_err());
    }

    #[test]
    fn analyze_a_pure_superposition() {
        let x = crate::market::make_price_observable(4, -1.0, 1.0).unwrap();
        let h = num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = [h, h, crate::linalg::ZERO, crate::linalg::ZERO];
        let report = analyze(&ComplexMatrix::outer(&psi), &x).unwrap();
        assert!((report.p_ent - 1.0).abs() < 1e-12);
        assert!((report.p_var.unwrap() - 1.0).abs() < 1e-12);
        assert!(report.s_vn.abs() < 1e-12);
    }
}
