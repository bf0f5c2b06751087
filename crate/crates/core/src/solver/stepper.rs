//! One semi-implicit time step on the staggered grid.
//!
//! Per step: continuity (explicit, upwinded mass flux) → momentum (explicit
//! advection and total pressure, backward-Euler viscosity) → induction
//! (explicit upwinded flux, backward-Euler resistivity when `nu > 0`).

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::FluidParams;
use crate::solver::tridiag::thomas_solve_into;
use crate::state::State;

/// Densities below this abort the run.
pub const RHO_ABORT: f64 = 1e-8;

/// Right-hand-side forcing added to each discrete equation.
///
/// Continuity is forced at the old time level, momentum and induction at
/// the new one (matching the explicit/implicit split of the step).
pub trait SourceTerms: Sync {
    fn continuity(&self, x: f64, t: f64) -> f64;
    fn momentum(&self, x: f64, t: f64) -> f64;
    fn induction(&self, x: f64, t: f64) -> f64;
}

/// Band storage and scratch reused across steps.
#[derive(Debug, Clone)]
pub struct StepperWorkspace {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
    solution: Vec<f64>,
    flux: Vec<f64>,
    total_pressure: Vec<f64>,
}

impl StepperWorkspace {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n_cells();
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
            rhs: vec![0.0; n],
            scratch: vec![0.0; n],
            solution: vec![0.0; n],
            flux: vec![0.0; n + 1],
            total_pressure: vec![0.0; n],
        }
    }

    fn solve(&mut self, len: usize) -> Result<()> {
        thomas_solve_into(
            &self.lower[..len],
            &self.diag[..len],
            &self.upper[..len],
            &self.rhs[..len],
            &mut self.scratch[..len],
            &mut self.solution[..len],
        )
    }
}

#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    params: FluidParams,
    nu: f64,
    ws: StepperWorkspace,
}

impl Stepper {
    pub fn new(grid: Grid, params: FluidParams, nu: f64) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::invalid(format!("nu must be >= 0, got {nu}")));
        }
        let ws = StepperWorkspace::new(&grid);
        Ok(Self {
            grid,
            params,
            nu,
            ws,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &FluidParams {
        &self.params
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Resistive step; `boundary` holds `(b1, b2)` at the new time level.
    pub fn step_resistive(
        &mut self,
        state: &State,
        dt: f64,
        boundary: (f64, f64),
    ) -> Result<State> {
        if self.nu <= 0.0 {
            return Err(Error::invalid("step_resistive requires nu > 0"));
        }
        self.advance(state, dt, Some(boundary), None)
    }

    /// Non-resistive step: pure advection of `b`, no magnetic boundary data.
    pub fn step_nonresistive(&mut self, state: &State, dt: f64) -> Result<State> {
        if self.nu != 0.0 {
            return Err(Error::invalid("step_nonresistive requires nu = 0"));
        }
        self.advance(state, dt, None, None)
    }

    /// General step with optional forcing. `boundary` is required iff `nu > 0`.
    pub fn advance(
        &mut self,
        state: &State,
        dt: f64,
        boundary: Option<(f64, f64)>,
        sources: Option<&dyn SourceTerms>,
    ) -> Result<State> {
        self.check_step(state, dt, boundary)?;
        let t_new = state.time + dt;
        let rho = self.continuity(state, dt, sources)?;
        let u = self.momentum(state, &rho, dt, t_new, sources)?;
        let b = self.induction(&state.b, &u, dt, t_new, boundary, sources)?;
        let next = State {
            rho,
            u,
            b,
            time: t_new,
        };
        next.validate()?;
        Ok(next)
    }

    /// Continuity and induction with the velocity held at `state.u`.
    ///
    /// Test hook for isolating the transport and diffusion parts.
    pub fn advance_frozen_velocity(
        &mut self,
        state: &State,
        dt: f64,
        boundary: Option<(f64, f64)>,
    ) -> Result<State> {
        self.check_step(state, dt, boundary)?;
        let t_new = state.time + dt;
        let rho = self.continuity(state, dt, None)?;
        let b = self.induction(&state.b, &state.u, dt, t_new, boundary, None)?;
        let next = State {
            rho,
            u: state.u.clone(),
            b,
            time: t_new,
        };
        next.validate()?;
        Ok(next)
    }

    fn check_step(&self, state: &State, dt: f64, boundary: Option<(f64, f64)>) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::DegenerateStep {
                dt,
                time: state.time,
            });
        }
        self.grid.check_cells(state.rho.len())?;
        self.grid.check_faces(state.u.len())?;
        self.grid.check_cells(state.b.len())?;
        match (self.nu > 0.0, boundary) {
            (true, None) => Err(Error::invalid("resistive step needs boundary values")),
            (false, Some(_)) => Err(Error::invalid(
                "non-resistive step takes no magnetic boundary data",
            )),
            _ => Ok(()),
        }
    }

    fn continuity(
        &mut self,
        state: &State,
        dt: f64,
        sources: Option<&dyn SourceTerms>,
    ) -> Result<Vec<f64>> {
        let n = self.grid.n_cells();
        let dx = self.grid.dx();
        let rho = &state.rho;
        let flux = &mut self.ws.flux;
        flux[0] = 0.0;
        flux[n] = 0.0;
        for f in 1..n {
            let u = state.u[f];
            let up = if u >= 0.0 { rho[f - 1] } else { rho[f] };
            flux[f] = u * up;
        }
        let r = dt / dx;
        let mut out: Vec<f64> = (0..n)
            .map(|i| rho[i] - r * (flux[i + 1] - flux[i]))
            .collect();
        if let Some(src) = sources {
            for (i, v) in out.iter_mut().enumerate() {
                *v += dt * src.continuity(self.grid.center(i), state.time);
            }
        }
        let t_new = state.time + dt;
        for (cell, &v) in out.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::Divergence {
                    field: "rho",
                    time: t_new,
                });
            }
            if v < RHO_ABORT {
                return Err(Error::Vacuum {
                    cell,
                    time: t_new,
                    rho: v,
                });
            }
        }
        Ok(out)
    }

    fn momentum(
        &mut self,
        state: &State,
        rho_new: &[f64],
        dt: f64,
        t_new: f64,
        sources: Option<&dyn SourceTerms>,
    ) -> Result<Vec<f64>> {
        let n = self.grid.n_cells();
        let dx = self.grid.dx();
        let lam = self.params.lambda();
        let u = &state.u;
        for i in 0..n {
            let b = state.b[i];
            self.ws.total_pressure[i] = self.params.p(rho_new[i]) + 0.5 * b * b;
        }
        let k = lam / (dx * dx);
        // unknowns are the interior faces 1..n-1, stored at index f-1
        let m = n - 1;
        for f in 1..n {
            let j = f - 1;
            let rho_f = 0.5 * (rho_new[f - 1] + rho_new[f]);
            let uf = u[f];
            let grad = (if uf > 0.0 {
                u[f] - u[f - 1]
            } else {
                u[f + 1] - u[f]
            }) / dx;
            let dp = (self.ws.total_pressure[f] - self.ws.total_pressure[f - 1]) / dx;
            let mut rhs = rho_f * (uf / dt - uf * grad) - dp;
            if let Some(src) = sources {
                rhs += src.momentum(self.grid.face(f), t_new);
            }
            self.ws.lower[j] = if j == 0 { 0.0 } else { -k };
            self.ws.upper[j] = if j + 1 == m { 0.0 } else { -k };
            self.ws.diag[j] = rho_f / dt + 2.0 * k;
            self.ws.rhs[j] = rhs;
        }
        self.ws.solve(m)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(0.0);
        out.extend_from_slice(&self.ws.solution[..m]);
        out.push(0.0);
        Ok(out)
    }

    fn induction(
        &mut self,
        b: &[f64],
        u_new: &[f64],
        dt: f64,
        t_new: f64,
        boundary: Option<(f64, f64)>,
        sources: Option<&dyn SourceTerms>,
    ) -> Result<Vec<f64>> {
        let n = self.grid.n_cells();
        let dx = self.grid.dx();
        let flux = &mut self.ws.flux;
        flux[0] = 0.0;
        flux[n] = 0.0;
        for f in 1..n {
            let u = u_new[f];
            let up = if u >= 0.0 { b[f - 1] } else { b[f] };
            flux[f] = u * up;
        }
        let src = |i: usize| sources.map_or(0.0, |s| s.induction(self.grid.center(i), t_new));

        let Some((b1, b2)) = boundary else {
            let r = dt / dx;
            return Ok((0..n)
                .map(|i| b[i] - r * (flux[i + 1] - flux[i]) + dt * src(i))
                .collect());
        };

        // Dirichlet data through the ghost value 2 b_wall - b_adjacent
        let k = self.nu / (dx * dx);
        for i in 0..n {
            let mut diag = 1.0 / dt + 2.0 * k;
            let mut rhs = b[i] / dt - (flux[i + 1] - flux[i]) / dx + src(i);
            if i == 0 {
                diag += k;
                rhs += 2.0 * k * b1;
            }
            if i + 1 == n {
                diag += k;
                rhs += 2.0 * k * b2;
            }
            self.ws.lower[i] = if i == 0 { 0.0 } else { -k };
            self.ws.upper[i] = if i + 1 == n { 0.0 } else { -k };
            self.ws.diag[i] = diag;
            self.ws.rhs[i] = rhs;
        }
        self.ws.solve(n)?;
        Ok(self.ws.solution[..n].to_vec())
    }
}

/// Stable step size for the explicit parts: acoustic and Alfvén limits.
pub fn stable_dt(state: &State, grid: &Grid, params: &FluidParams, cfl: f64) -> Result<f64> {
    let rho_min = state.rho_min();
    if !(rho_min >= RHO_ABORT) {
        return Err(Error::DegenerateStep {
            dt: 0.0,
            time: state.time,
        });
    }
    let mut acoustic = 0.0f64;
    let mut alfven = 0.0f64;
    for (i, &rho) in state.rho.iter().enumerate() {
        let u = state.u[i].abs().max(state.u[i + 1].abs());
        acoustic = acoustic.max(u + params.sound_speed(rho));
        alfven = alfven.max(state.b[i].abs() / rho.sqrt());
    }
    let dx = grid.dx();
    let mut dt = dx / acoustic;
    if alfven > 0.0 {
        dt = dt.min(dx / alfven);
    }
    let dt = cfl * dt;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::DegenerateStep {
            dt,
            time: state.time,
        });
    }
    Ok(dt)
}

/// Shrinks `dt` so that `t + dt` lands on `stop` without leaving a sliver.
///
/// Returns the step and whether it lands exactly on `stop`.
pub fn clamp_to_stop(t: f64, dt: f64, stop: f64) -> (f64, bool) {
    let remaining = stop - t;
    if dt >= remaining * (1.0 - 1e-12) {
        (remaining, true)
    } else if dt * 1.5 > remaining {
        (0.5 * remaining, false)
    } else {
        (dt, false)
    }
}
