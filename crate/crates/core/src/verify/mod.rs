//! Correctness oracles: trivial-solution preservation, manufactured
//! solutions and refined-grid self-convergence.

mod mms;

pub use mms::{
    mms_errors, mms_order_study, ConstantCase, DecayingTrigCase, ManufacturedCase, MmsReport,
    Order, System, EXACT_TOLERANCE,
};

use crate::boundary::BoundaryMagnetic;
use crate::config::{InitialData, ScenarioConfig, DEFAULT_CFL};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{restrict_cells, restrict_faces};
use crate::norms::l2_distance;
use crate::params::FluidParams;
use crate::solver::run_observed;
use crate::state::State;

/// Deviation allowed for the trivial fixed point.
pub const TRIVIAL_TOLERANCE: f64 = 1e-12;

/// First-order window for self-convergence ratios.
pub const CONVERGENCE_WINDOW: (f64, f64) = (1.7, 2.3);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialVerdict {
    Pass,
    Fail,
    /// Nonzero wall data drives the state away from `(ρ̄, 0, 0)`; the
    /// trivial-solution statement does not apply.
    NontrivialForcing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialCheck {
    /// `max_{t,x} |ρ - ρ̄| + |u| + |b|`.
    pub max_deviation: f64,
    pub verdict: TrivialVerdict,
}

fn deviation(state: &State, rho_bar: f64) -> f64 {
    let sup = |v: &[f64], c: f64| v.iter().fold(0.0_f64, |m, &x| m.max((x - c).abs()));
    sup(&state.rho, rho_bar) + sup(&state.u, 0.0) + sup(&state.b, 0.0)
}

/// Runs from `(ρ̄, 0, 0)` and measures the largest departure from it.
///
/// `boundary` is ignored for `nu = 0`.
pub fn trivial_solution_check(
    params: FluidParams,
    rho_bar: f64,
    nu: f64,
    boundary: BoundaryMagnetic,
    grid_n: usize,
    t_final: f64,
) -> Result<TrivialCheck> {
    let boundary = if nu > 0.0 {
        boundary
    } else {
        BoundaryMagnetic::None
    };
    let cfg = ScenarioConfig::new(
        params,
        nu,
        grid_n,
        t_final,
        InitialData::Constant { rho_bar },
        boundary,
        DEFAULT_CFL,
        vec![t_final],
    )?;
    let mut max_deviation = 0.0_f64;
    run_observed(&cfg, |ev| {
        max_deviation = max_deviation.max(deviation(ev.next, rho_bar))
    })?;
    let verdict = if max_deviation <= TRIVIAL_TOLERANCE {
        TrivialVerdict::Pass
    } else if !boundary.is_identically_zero() {
        TrivialVerdict::NontrivialForcing
    } else {
        TrivialVerdict::Fail
    };
    Ok(TrivialCheck {
        max_deviation,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceStatus {
    /// Every ratio inside [`CONVERGENCE_WINDOW`].
    Converging,
    /// All differences at round-off; ratios carry no information.
    NotApplicable,
    UnderResolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfConvergence {
    pub grids: Vec<usize>,
    /// `(ρ, u, b)` L² differences between level `j` and the restriction of
    /// level `j + 1`, measured on the level-`j` grid.
    pub differences: Vec<[f64; 3]>,
    /// Ratios of combined differences, `d_j / d_{j+1}`.
    pub ratios: Vec<f64>,
    pub status: ConvergenceStatus,
}

/// Runs `config` at `n, 2n, ..., 2^(k-1) n` and compares successive levels
/// at `T` after restricting the finer one by cell averaging.
pub fn self_convergence(
    config: &ScenarioConfig,
    levels: usize,
    exec: Execution,
) -> Result<SelfConvergence> {
    if levels < 3 {
        return Err(Error::invalid(format!(
            "self-convergence needs >= 3 levels, got {levels}"
        )));
    }
    config.validate()?;
    let grids: Vec<usize> = (0..levels).map(|j| config.grid_n << j).collect();
    let finals = exec
        .map(&grids, |&n| {
            let mut cfg = config.with_grid(n)?;
            cfg.snapshot_times = vec![cfg.t_final];
            crate::solver::run(&cfg).map(|r| r.final_state)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut differences = Vec::with_capacity(levels - 1);
    for (j, pair) in finals.windows(2).enumerate() {
        let grid = crate::grid::Grid::new(grids[j])?;
        let (coarse, fine) = (&pair[0], &pair[1]);
        differences.push([
            l2_distance(&coarse.rho, &restrict_cells(&fine.rho, 2)?, &grid)?,
            l2_distance(&coarse.u, &restrict_faces(&fine.u, 2)?, &grid)?,
            l2_distance(&coarse.b, &restrict_cells(&fine.b, 2)?, &grid)?,
        ]);
    }
    let combined: Vec<f64> = differences
        .iter()
        .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
        .collect();

    if combined.iter().all(|&d| d <= TRIVIAL_TOLERANCE) {
        return Ok(SelfConvergence {
            grids,
            differences,
            ratios: Vec::new(),
            status: ConvergenceStatus::NotApplicable,
        });
    }
    let ratios: Vec<f64> = combined.windows(2).map(|w| w[0] / w[1]).collect();
    let (lo, hi) = CONVERGENCE_WINDOW;
    let status = if ratios.iter().all(|r| (lo..=hi).contains(r)) {
        ConvergenceStatus::Converging
    } else {
        ConvergenceStatus::UnderResolved
    };
    Ok(SelfConvergence {
        grids,
        differences,
        ratios,
        status,
    })
}
