//! Time evolution of the market state.

mod exact;
mod generator;
mod gksl;
mod propagate;

pub use exact::{exact_propagate_small, expm, superoperator, ExactPropagator, MAX_EXACT_DIM};
pub use generator::{
    apply_adjoint_generator, apply_classical_generator, apply_generator, apply_shift_l,
    heisenberg_step,
};
pub use gksl::{
    gksl_standard_form, is_classical_evolution, is_completely_positive, CpReport, GkslForm,
    CLASSICALITY_TOLERANCE,
};
pub use propagate::{
    euler_step, euler_step_raw, simulate, Segment, StepSchedule, Trajectory, HEALTH_LIMIT,
    MIN_EIGENVALUE_EVERY,
};
