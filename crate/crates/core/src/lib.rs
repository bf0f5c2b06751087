//! Numerical laboratory for the one-dimensional compressible isentropic
//! viscous MHD equations
//!
//! ```text
//! ρ_t + (ρu)_x = 0
//! (ρu)_t + (ρu² + P(ρ) + b²/2)_x = λ u_xx
//! b_t + (ub)_x = ν b_xx
//! ```
//!
//! on `(0, 1)` with non-slip walls, in both the resistive (`ν > 0`, Dirichlet
//! data for `b`) and the non-resistive (`ν = 0`, no magnetic boundary data)
//! regimes.
//!
//! - [`solver`]: staggered-grid semi-implicit integrator.
//! - [`diagnostics`]: energy and mass balances, effective viscous flux,
//!   transport and wall-flux residuals.
//! - [`limit`]: `ν → 0` sweeps against the non-resistive reference.
//! - [`layer`]: magnetic boundary-layer study from `(ρ̄, 0, 0)`.
//! - [`verify`]: trivial-solution, manufactured-solution and
//!   self-convergence checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(
    clippy::needless_range_loop,
    clippy::too_many_arguments,
    clippy::manual_is_multiple_of
)]

pub mod boundary;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod fit;
pub mod grid;
pub mod layer;
pub mod limit;
pub mod norms;
pub mod params;
pub mod solver;
pub mod state;
pub mod verify;

pub use boundary::BoundaryMagnetic;
pub use config::{uniform_times, InitialData, ScenarioConfig};
pub use error::{Error, Result};
pub use exec::Execution;
pub use grid::Grid;
pub use params::{pressure, FluidParams};
pub use state::State;
