//! Market prices as an open quantum system.
//!
//! The market state is an `N x N` density matrix over price levels
//! `x_1 < ... < x_N`. It evolves under a Lindblad generator built from the
//! price shift operators `A_u`, `A_d` with a diffusion rate `sigma^2` and
//! coherent rates `nu_u^2`, `nu_d^2`:
//!
//! ```text
//! d rho/dt = sigma^2 (A_u rho A_d + A_d rho A_u - 1/2 {A_u A_d + A_d A_u, rho})
//!          + nu_u^2 (A_u rho A_u - 1/2 {A_u A_u, rho})
//!          + nu_d^2 (A_d rho A_d - 1/2 {A_d A_d, rho})
//! ```
//!
//! With `nu = 0` a diagonal state stays diagonal and the model is a
//! classical random walk; nonzero `nu` feeds the even off-diagonals.
//!
//! ```
//! use oqs_market::dynamics::euler_step;
//! use oqs_market::market::{dirac_state, make_shift_operators, BoundaryMode, LindbladCoefficients};
//!
//! let ops = make_shift_operators(21, BoundaryMode::HardWall).unwrap();
//! let rho = dirac_state(21, 11).unwrap();
//! let coeffs = LindbladCoefficients::from_rates(0.4, 0.36, 0.36);
//! let next = euler_step(&rho, &coeffs, &ops, 0.01).unwrap();
//! assert!((next.get(11, 11).re - 0.9968).abs() < 1e-12);
//! ```
//!
//! Matrix indices in every public interface are 1-based.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod market;
pub mod metrics;
pub mod scenario;

pub use error::{Error, Result};
