//! Explicit Euler propagation and the multi-segment simulation driver.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::market::{LindbladCoefficients, OperatorSet, PriceObservable};
use crate::metrics::{self, MetricsRecord};

use super::generator::euler_update;

/// Trace or Hermiticity drift beyond this aborts a run.
pub const HEALTH_LIMIT: f64 = 1e-6;

/// Every `MIN_EIGENVALUE_EVERY`-th record carries the minimum eigenvalue.
pub const MIN_EIGENVALUE_EVERY: usize = 10;

/// `rho + dt * L(rho)`, followed by `(M + M^dagger) / 2`.
///
/// Positivity is not enforced.
pub fn euler_step(
    rho: &DensityMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    dt: f64,
) -> Result<DensityMatrix> {
    Ok(euler_step_raw(rho.matrix(), coeffs, ops, dt)?.0)
}

/// Euler step that also reports the Hermiticity defect removed by the
/// symmetrization.
pub fn euler_step_raw(
    rho: &ComplexMatrix,
    coeffs: &LindbladCoefficients,
    ops: &OperatorSet,
    dt: f64,
) -> Result<(DensityMatrix, f64)> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let mut next = euler_update(rho, coeffs, ops, dt)?;
    let defect = next.symmetrize_in_place();
    Ok((DensityMatrix::from_evolved(next), defect))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub steps: u64,
    pub coefficients: LindbladCoefficients,
}

/// Piecewise-constant coefficient schedule with a fixed step size.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSchedule {
    pub segments: Vec<Segment>,
    pub dt: f64,
}

impl StepSchedule {
    pub fn new(segments: Vec<Segment>, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if let Some(k) = segments.iter().position(|s| s.steps == 0) {
            return Err(Error::InvalidArgument(format!("segment {} has zero steps", k + 1)));
        }
        Ok(Self { segments, dt })
    }

    pub fn single(steps: u64, coefficients: LindbladCoefficients, dt: f64) -> Result<Self> {
        Self::new(vec![Segment { steps, coefficients }], dt)
    }

    pub fn total_steps(&self) -> u64 {
        self.segments.iter().map(|s| s.steps).sum()
    }
}

/// Output of [`simulate`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_state: DensityMatrix,
    pub records: Vec<MetricsRecord>,
    pub segment_wall_time: Vec<Duration>,
    /// Largest Hermiticity defect removed by any step.
    pub max_hermiticity_defect: f64,
    /// Records whose spectrum dipped below `-1e-9`.
    pub positivity_dips: usize,
}

/// Runs every segment in order, recording metrics at step 0, every
/// `record_stride` steps and at each segment boundary.
///
/// Fails with [`Error::HealthCheck`] when the trace or the pre-symmetrization
/// Hermiticity defect drifts beyond [`HEALTH_LIMIT`].
pub fn simulate(
    rho0: &DensityMatrix,
    schedule: &StepSchedule,
    ops: &OperatorSet,
    price: &PriceObservable,
    record_stride: u64,
) -> Result<Trajectory> {
    if record_stride == 0 {
        return Err(Error::InvalidArgument("record stride must be at least 1".into()));
    }
    if rho0.dim() != ops.dim {
        return Err(Error::DimensionMismatch { expected: ops.dim, found: rho0.dim() });
    }
    let mut recorder = Recorder { price, records: Vec::new(), positivity_dips: 0 };
    let mut rho = rho0.clone();
    let mut step: u64 = 0;
    let mut worst_defect: f64 = 0.0;
    let mut wall = Vec::with_capacity(schedule.segments.len());

    if schedule.total_steps() > 0 {
        recorder.record(0, 0.0, &rho)?;
    }
    for segment in &schedule.segments {
        let started = Instant::now();
        for k in 1..=segment.steps {
            let (next, defect) = euler_step_raw(rho.matrix(), &segment.coefficients, ops, schedule.dt)?;
            rho = next;
            step += 1;
            worst_defect = worst_defect.max(defect);
            if defect > HEALTH_LIMIT {
                return Err(Error::HealthCheck {
                    step,
                    reason: format!("Hermiticity drift {defect:e}"),
                });
            }
            if step.is_multiple_of(record_stride) || k == segment.steps {
                recorder.record(step, step as f64 * schedule.dt, &rho)?;
            }
        }
        wall.push(started.elapsed());
    }

    Ok(Trajectory {
        final_state: rho,
        records: recorder.records,
        segment_wall_time: wall,
        max_hermiticity_defect: worst_defect,
        positivity_dips: recorder.positivity_dips,
    })
}

struct Recorder<'a> {
    price: &'a PriceObservable,
    records: Vec<MetricsRecord>,
    positivity_dips: usize,
}

impl Recorder<'_> {
    fn record(&mut self, step: u64, time: f64, rho: &DensityMatrix) -> Result<()> {
        let trace_error = rho.trace_error();
        if trace_error > HEALTH_LIMIT {
            return Err(Error::HealthCheck { step, reason: format!("trace drift {trace_error:e}") });
        }
        let with_min = self.records.len().is_multiple_of(MIN_EIGENVALUE_EVERY);
        let (record, min_eig) = metrics::collect(step, time, rho.matrix(), self.price, with_min)?;
        if min_eig < -1e-9 {
            self.positivity_dips += 1;
        }
        self.records.push(record);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::market::{dirac_state, gaussian_state, make_price_observable, make_shift_operators, BoundaryMode};
    use crate::metrics::offdiagonal_power;

    fn reference_coeffs() -> LindbladCoefficients {
        LindbladCoefficients::from_rates(0.4, 0.36, 0.36)
    }

    #[test]
    fn one_step_from_dirac() {
        let ops = make_shift_operators(21, BoundaryMode::HardWall).unwrap();
        let rho = dirac_state(21, 11).unwrap();
        let next = euler_step(&rho, &reference_coeffs(), &ops, 0.01).unwrap();
        assert!((next.get(11, 11).re - 0.9968).abs() < 1e-15);
        let nu2dt = 0.1296 * 0.01;
        for (i, j) in [(12, 10), (10, 12)] {
            assert!((next.get(i, j).re - nu2dt).abs() < 1e-17);
        }
        for (i, j) in [(11, 9), (9, 11), (13, 11), (11, 13)] {
            assert!((next.get(i, j).re + nu2dt / 2.0).abs() < 1e-17);
        }
        assert!(next.trace_error() < 1e-13);
    }

    #[test]
    fn classical_step_keeps_diagonal() {
        let ops = make_shift_operators(15, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(15, -1.0, 1.0).unwrap();
        let rho = gaussian_state(&x.values, 0.3).unwrap();
        let next = euler_step(&rho, &LindbladCoefficients::classical(0.4), &ops, 0.01).unwrap();
        assert!(next.matrix().is_exactly_diagonal());
    }

    #[test]
    fn single_step_schedule_equals_euler_step() {
        let ops = make_shift_operators(9, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(9, -1.0, 1.0).unwrap();
        let rho = dirac_state(9, 5).unwrap();
        let schedule = StepSchedule::single(1, reference_coeffs(), 0.01).unwrap();
        let traj = simulate(&rho, &schedule, &ops, &x, 100).unwrap();
        let direct = euler_step(&rho, &reference_coeffs(), &ops, 0.01).unwrap();
        assert_eq!(traj.final_state, direct);
        assert_eq!(traj.records.iter().map(|r| r.step).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn records_at_stride_and_segment_boundaries() {
        let ops = make_shift_operators(9, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(9, -1.0, 1.0).unwrap();
        let rho = gaussian_state(&x.values, 0.3).unwrap();
        let schedule = StepSchedule::new(
            vec![
                Segment { steps: 25, coefficients: reference_coeffs() },
                Segment { steps: 12, coefficients: LindbladCoefficients::classical(0.4) },
            ],
            0.01,
        )
        .unwrap();
        let traj = simulate(&rho, &schedule, &ops, &x, 10).unwrap();
        let steps: Vec<u64> = traj.records.iter().map(|r| r.step).collect();
        assert_eq!(steps, vec![0, 10, 20, 25, 30, 37]);
        assert!(traj.records[0].min_eigenvalue.is_some());
        assert!(traj.records[1].min_eigenvalue.is_none());
        for r in &traj.records {
            assert!(r.trace_error < 1e-9);
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let ops = make_shift_operators(11, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(11, -1.0, 1.0).unwrap();
        let rho = gaussian_state(&x.values, 0.2).unwrap();
        let schedule = StepSchedule::single(200, reference_coeffs(), 0.004).unwrap();
        let a = simulate(&rho, &schedule, &ops, &x, 20).unwrap();
        let b = simulate(&rho, &schedule, &ops, &x, 20).unwrap();
        assert_eq!(a.final_state, b.final_state);
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn non_hermitian_coefficients_abort() {
        let ops = make_shift_operators(9, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(9, -1.0, 1.0).unwrap();
        let rho = dirac_state(9, 5).unwrap();
        let schedule = StepSchedule::single(10, LindbladCoefficients::from_rates(0.4, 0.36, 0.1), 0.01).unwrap();
        assert!(matches!(
            simulate(&rho, &schedule, &ops, &x, 5),
            Err(Error::HealthCheck { step: 1, .. })
        ));
    }

    #[test]
    fn invalid_inputs() {
        assert!(StepSchedule::single(1, reference_coeffs(), 0.0).is_err());
        assert!(StepSchedule::single(0, reference_coeffs(), 0.1).is_err());
        let ops = make_shift_operators(5, BoundaryMode::HardWall).unwrap();
        let x = make_price_observable(5, -1.0, 1.0).unwrap();
        let rho = dirac_state(5, 3).unwrap();
        let schedule = StepSchedule::single(1, reference_coeffs(), 0.1).unwrap();
        assert!(simulate(&rho, &schedule, &ops, &x, 0).is_err());
        let empty = StepSchedule::new(vec![], 0.1).unwrap();
        let traj = simulate(&rho, &empty, &ops, &x, 1).unwrap();
        assert!(traj.records.is_empty());
        assert_eq!(traj.final_state.get(3, 3), ONE);
    }

    #[test]
    fn nonclassical_step_populates_even_offdiagonals() {
        let ops = make_shift_operators(21, BoundaryMode::HardWall).unwrap();
        let rho = dirac_state(21, 11).unwrap();
        let next = euler_step(&rho, &reference_coeffs(), &ops, 0.01).unwrap();
        assert!(offdiagonal_power(next.matrix(), 2) > 0.0);
        assert_eq!(offdiagonal_power(next.matrix(), 1), 0.0);
    }
}
