//! Relative controllability of discrete linear systems with one constant delay,
//!
//! ```text
//! y(r+1) = A y(r) + B y(r-p) + C u(r),   y(r) = ψ(r) for r ∈ [-p, 0].
//! ```
//!
//! The crate evaluates the delayed perturbation of the discrete matrix
//! exponential `Y(r)` ([`kernel`]), decides controllability through the
//! Kalman-type rank condition and the controllability Gramian
//! ([`controllability`]), and builds the explicit control steering any
//! history to any target ([`synthesis`]). Everything runs over exact
//! rationals by default, or over `f64`.
//!
//! `no_std`; needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod controllability;
pub mod error;
mod fraction_free;
pub mod kernel;
pub mod matrix;
pub mod scalar;
pub mod synthesis;
pub mod system;

pub use controllability::{
    analyze, effective_inputs, gramian, kalman_matrix, kernel_null_test, kernel_null_test_default, minimal_horizon,
    rank_condition, steering_vector, system_minimal_horizon, ControllabilityReport, Gramian, NullTest, Verdict,
};
pub use error::{Error, Result};
pub use kernel::{band_index, q_direct, DelaySystem, KernelTable};
pub use matrix::{Matrix, Vector};
pub use scalar::{Rational, Scalar};
pub use synthesis::{synthesize, verify_plan, SteeringPlan};
pub use system::{
    closed_form_state, forced_response, free_response, representation_residual, simulate, ControlSequence,
    InitialHistory, Trajectory,
};
