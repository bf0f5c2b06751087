use std::time::{Duration, Instant};

use crate::config::ScenarioConfig;
use crate::diagnostics::{boundary_power, dissipation_rate, InvariantRecord};
use crate::error::{Error, Result};
use crate::solver::stepper::{clamp_to_stop, stable_dt, Stepper};
use crate::state::State;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub state: State,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub snapshots: Vec<Snapshot>,
    pub invariant_series: Vec<InvariantRecord>,
    pub step_count: usize,
    pub wall_time: Duration,
    /// `∫₀ᵀ ν (b₂ b_x(1) - b₁ b_x(0)) dt`, trapezoid; zero for `ν = 0`.
    pub boundary_work: f64,
    pub final_state: State,
}

/// A completed step, handed to run observers.
#[derive(Debug, Clone, Copy)]
pub struct StepEvent<'a> {
    pub prev: &'a State,
    pub next: &'a State,
    pub dt: f64,
    /// `(b1, b2)` at `next.time`, when the system takes wall data.
    pub boundary: Option<(f64, f64)>,
}

/// CFL step from `state`, clamped so the run lands on the next snapshot
/// time or on `t_final`.
pub fn cfl_dt(state: &State, config: &ScenarioConfig) -> Result<f64> {
    let grid = config.grid();
    let dt = stable_dt(state, &grid, &config.params, config.cfl)?;
    let stop = next_stop(state.time, config);
    if stop <= state.time {
        return Err(Error::DegenerateStep {
            dt: 0.0,
            time: state.time,
        });
    }
    Ok(clamp_to_stop(state.time, dt, stop).0)
}

fn next_stop(t: f64, config: &ScenarioConfig) -> f64 {
    config
        .snapshot_times
        .iter()
        .copied()
        .find(|&s| s > t)
        .unwrap_or(config.t_final)
        .min(config.t_final)
}

/// Integrates `config` from its initial data to `t_final`.
pub fn run(config: &ScenarioConfig) -> Result<RunResult> {
    run_observed(config, |_| {})
}

/// Like [`run`], calling `observer` after every step.
pub fn run_observed(
    config: &ScenarioConfig,
    observer: impl FnMut(&StepEvent<'_>),
) -> Result<RunResult> {
    run_from(config, config.initial_state(), observer)
}

/// Integrates from an explicit initial state (at `state.time`).
pub fn run_from(
    config: &ScenarioConfig,
    initial: State,
    mut observer: impl FnMut(&StepEvent<'_>),
) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let grid = config.grid();
    let params = config.params;
    let nu = config.nu;
    let boundary_at = |t: f64| {
        if nu > 0.0 {
            config.boundary_b.values(t)
        } else {
            None
        }
    };
    let mut stepper = Stepper::new(grid.clone(), params, nu)?;

    let mut state = initial;
    state.validate()?;
    let mut snapshots = Vec::with_capacity(config.snapshot_times.len());
    let mut pending = config.snapshot_times.iter().copied().peekable();
    while let Some(&t) = pending.peek() {
        if t <= state.time {
            snapshots.push(Snapshot {
                time: t,
                state: state.clone(),
            });
            pending.next();
        } else {
            break;
        }
    }

    let mut boundary = boundary_at(state.time);
    let mut rate = dissipation_rate(&state, &grid, &params, nu, boundary);
    let mut power = boundary.map_or(0.0, |bv| boundary_power(&state, &grid, nu, bv));
    let mut accum = 0.0;
    let mut work = 0.0;
    let mut series = vec![InvariantRecord::measure(&state, &grid, &params, accum)];
    let mut steps = 0usize;

    while state.time < config.t_final {
        let raw = stable_dt(&state, &grid, &params, config.cfl)?;
        let stop = next_stop(state.time, config);
        let (dt, lands) = clamp_to_stop(state.time, raw, stop);
        let t_new = if lands { stop } else { state.time + dt };
        let next_boundary = boundary_at(t_new);
        let mut next = stepper.advance(&state, dt, next_boundary, None)?;
        next.time = t_new;
        steps += 1;

        let next_rate = dissipation_rate(&next, &grid, &params, nu, next_boundary);
        let next_power = next_boundary.map_or(0.0, |bv| boundary_power(&next, &grid, nu, bv));
        accum += 0.5 * dt * (rate + next_rate);
        work += 0.5 * dt * (power + next_power);
        rate = next_rate;
        power = next_power;
        boundary = next_boundary;
        series.push(InvariantRecord::measure(&next, &grid, &params, accum));

        observer(&StepEvent {
            prev: &state,
            next: &next,
            dt,
            boundary,
        });

        while let Some(&t) = pending.peek() {
            if t <= next.time {
                snapshots.push(Snapshot {
                    time: t,
                    state: next.clone(),
                });
                pending.next();
            } else {
                break;
            }
        }
        state = next;
    }

    Ok(RunResult {
        snapshots,
        invariant_series: series,
        step_count: steps,
        wall_time: started.elapsed(),
        boundary_work: work,
        final_state: state,
    })
}
