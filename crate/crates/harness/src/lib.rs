//! Experiment engine behind the `hankel-recover` CLI: phase-transition grids,
//! the Monte-Carlo spectral-norm scan, single recovery runs, and CSV output.

// `!(a > b)` is used on purpose so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv_out;
pub mod error;
pub mod norm_scan;
pub mod phase;
pub mod pool;
pub mod recover;
pub mod seed;

pub use csv_out::{emit_csv, CsvTable};
pub use error::{HarnessError, Result};
pub use norm_scan::{run_norm_scan, NormEstimate, NormScan};
pub use phase::{run_phase_transition, PhaseGrid, PhaseGridSpec};
pub use recover::{run_recover, RecoverReport, RecoverSpec};
