//! Time integration of the resistive (`ν > 0`) and non-resistive (`ν = 0`)
//! systems.

mod run;
mod stepper;
mod tridiag;

pub use run::{cfl_dt, run, run_from, run_observed, RunResult, Snapshot, StepEvent};
pub use stepper::{clamp_to_stop, stable_dt, SourceTerms, Stepper, StepperWorkspace, RHO_ABORT};
pub use tridiag::{thomas_solve, thomas_solve_into};
