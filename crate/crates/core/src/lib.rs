//! Recovery of superpositions of complex exponentials from scaled Gaussian
//! projections.
//!
//! A length `2N-1` signal `x_j = sum_k c_k z_k^j` lifts to an `N x N` Hankel
//! matrix of rank `R`. Given `b = B D x (+ noise)` with `B` complex Gaussian and
//! `D` the anti-diagonal length weights, the signal is recovered by minimizing
//! the nuclear norm of the lifted matrix over the measurement-consistent set.
//!
//! Modules:
//! - [`hankel`]: lifting operators, adjoints, weights and the Toeplitz flip.
//! - [`modal`]: test-signal synthesis and matrix-pencil mode extraction.
//! - [`measurement`]: the Gaussian ensemble, noise, and feasibility projections.
//! - [`solver`]: singular value thresholding and the ADMM recovery loop.

// `!(a > b)` is used on purpose so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hankel;
pub mod linalg;
pub mod measurement;
pub mod modal;
pub mod solver;

pub use error::{Error, Result};
pub use hankel::{hankel_map, toeplitz_map, HankelLift};
pub use linalg::{CMatrix, CVector};
pub use measurement::{measure, sample_ensemble, MeasurementEnsemble, Observation};
pub use modal::{
    matrix_pencil, random_instance, synthesize, Family, ModalSignal, Mode, PencilOptions,
};
pub use num_complex::Complex64;
pub use solver::{solve, success, svt, RecoveryResult, SolverConfig};
