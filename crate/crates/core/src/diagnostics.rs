//! Discrete versions of the quantities the a-priori analysis tracks:
//! mass and energy balances, the effective viscous flux
//! `F = λ u_x - P(ρ) - b²/2`, the material derivative `u̇ = u_t + u u_x`,
//! transport identities and the wall formulas for `ν b_x`.
//!
//! None of these identities hold exactly for the discrete scheme. They are
//! evaluated as residuals that must shrink under refinement.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::FluidParams;
use crate::state::State;

/// Per-step scalar record of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantRecord {
    pub time: f64,
    pub total_mass: f64,
    pub energy: f64,
    /// `∫₀ᵗ (λ‖u_x‖² + ν‖b_x‖²) ds`, trapezoid in time.
    pub dissipation_accum: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub b_sup: f64,
    pub ux_l2: f64,
}

impl InvariantRecord {
    pub fn measure(
        state: &State,
        grid: &Grid,
        params: &FluidParams,
        dissipation_accum: f64,
    ) -> Self {
        Self {
            time: state.time,
            total_mass: total_mass(state, grid),
            energy: energy(state, grid, params),
            dissipation_accum,
            rho_min: state.rho_min(),
            rho_max: state.rho_max(),
            b_sup: state.b_sup(),
            ux_l2: ux_l2(state, grid),
        }
    }
}

/// `Σ ρ dx`.
pub fn total_mass(state: &State, grid: &Grid) -> f64 {
    state.rho.iter().sum::<f64>() * grid.dx()
}

/// `∫ (½ρu² + ½b² + A/(γ-1) ρ^γ)`; kinetic part at faces with face density.
pub fn energy(state: &State, grid: &Grid, params: &FluidParams) -> f64 {
    let n = grid.n_cells();
    let kinetic: f64 = (1..n)
        .map(|f| {
            let rho_f = 0.5 * (state.rho[f - 1] + state.rho[f]);
            0.5 * rho_f * state.u[f] * state.u[f]
        })
        .sum();
    let cells: f64 = state
        .rho
        .iter()
        .zip(&state.b)
        .map(|(&r, &b)| 0.5 * b * b + params.internal_energy(r))
        .sum();
    (kinetic + cells) * grid.dx()
}

/// `‖u_x‖_{L²}` with `u_x` evaluated at cell centres.
pub fn ux_l2(state: &State, grid: &Grid) -> f64 {
    let dx = grid.dx();
    let s: f64 = state
        .u
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .sum();
    (s / dx).sqrt()
}

/// `‖b_x‖²_{L²}`; with wall data the half cells next to the walls are included.
pub fn bx_l2_squared(b: &[f64], grid: &Grid, boundary: Option<(f64, f64)>) -> f64 {
    let dx = grid.dx();
    let n = grid.n_cells();
    let mut s: f64 = b
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .sum::<f64>()
        / dx;
    if let Some((b1, b2)) = boundary {
        let half = 0.5 * dx;
        s += (b[0] - b1) * (b[0] - b1) / half;
        s += (b2 - b[n - 1]) * (b2 - b[n - 1]) / half;
    }
    s
}

/// Instantaneous dissipation `λ‖u_x‖² + ν‖b_x‖²`.
pub fn dissipation_rate(
    state: &State,
    grid: &Grid,
    params: &FluidParams,
    nu: f64,
    boundary: Option<(f64, f64)>,
) -> f64 {
    let ux = ux_l2(state, grid);
    let mut d = params.lambda() * ux * ux;
    if nu > 0.0 {
        d += nu * bx_l2_squared(&state.b, grid, boundary);
    }
    d
}

/// One-sided second-order `b_x` at `x = 0` and `x = 1` from the wall value
/// and the two nearest cell centres (nodes at 0, dx/2, 3dx/2).
pub fn wall_gradients(b: &[f64], grid: &Grid, boundary: (f64, f64)) -> (f64, f64) {
    let n = grid.n_cells();
    let dx = grid.dx();
    let (b1, b2) = boundary;
    let left = (-8.0 * b1 + 9.0 * b[0] - b[1]) / (3.0 * dx);
    let right = (8.0 * b2 - 9.0 * b[n - 1] + b[n - 2]) / (3.0 * dx);
    (left, right)
}

/// Power `ν (b₂ b_x(1) - b₁ b_x(0))` injected through the walls.
pub fn boundary_power(state: &State, grid: &Grid, nu: f64, boundary: (f64, f64)) -> f64 {
    let (bx0, bx1) = wall_gradients(&state.b, grid, boundary);
    nu * (boundary.1 * bx1 - boundary.0 * bx0)
}

/// `F_i = λ (u_{i+1/2} - u_{i-1/2})/dx - P(ρ_i) - b_i²/2`.
pub fn effective_viscous_flux(
    state: &State,
    grid: &Grid,
    params: &FluidParams,
) -> Result<Vec<f64>> {
    grid.check_cells(state.rho.len())?;
    grid.check_faces(state.u.len())?;
    grid.check_cells(state.b.len())?;
    let dx = grid.dx();
    let lam = params.lambda();
    Ok((0..grid.n_cells())
        .map(|i| {
            let b = state.b[i];
            lam * (state.u[i + 1] - state.u[i]) / dx - params.p(state.rho[i]) - 0.5 * b * b
        })
        .collect())
}

/// `u̇ = (u_next - u_prev)/dt + u_next · (upwinded u_x)` at interior faces;
/// wall faces report 0.
pub fn material_derivative_u(prev: &State, next: &State, grid: &Grid, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    grid.check_faces(prev.u.len())?;
    grid.check_faces(next.u.len())?;
    let n = grid.n_cells();
    let dx = grid.dx();
    let u = &next.u;
    let mut out = vec![0.0; n + 1];
    for f in 1..n {
        let grad = (if u[f] > 0.0 {
            u[f] - u[f - 1]
        } else {
            u[f + 1] - u[f]
        }) / dx;
        out[f] = (u[f] - prev.u[f]) / dt + u[f] * grad;
    }
    Ok(out)
}

/// `‖F_x - ρ u̇‖_{L²}` over the interior faces.
pub fn flux_gradient_identity_residual(
    state: &State,
    params: &FluidParams,
    state_prev: &State,
    grid: &Grid,
    dt: f64,
) -> Result<f64> {
    let flux = effective_viscous_flux(state, grid, params)?;
    let accel = material_derivative_u(state_prev, state, grid, dt)?;
    let dx = grid.dx();
    let s: f64 = (1..grid.n_cells())
        .map(|f| {
            let rho_f = 0.5 * (state.rho[f - 1] + state.rho[f]);
            let r = (flux[f] - flux[f - 1]) / dx - rho_f * accel[f];
            r * r
        })
        .sum();
    Ok((s * dx).sqrt())
}

/// `E(t) + ∫D - E(0) - W` for the last record, where `W` is the boundary
/// work (zero for the non-resistive system).
pub fn energy_balance_residual(records: &[InvariantRecord], boundary_work: f64) -> Result<f64> {
    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InsufficientData("no invariant records".into())),
    };
    Ok(
        last.energy + (last.dissipation_accum - first.dissipation_accum)
            - first.energy
            - boundary_work,
    )
}

/// `Σ (1 - x_i) b_i dx` and `Σ x_i b_i dx`, the nested midpoint sums of
/// `∫₀¹∫₀ˣ b` and `∫₀¹∫ₓ¹ b`.
fn nested_integrals(b: &[f64], grid: &Grid) -> (f64, f64) {
    let dx = grid.dx();
    let mut running = 0.0;
    let mut from_left = 0.0;
    let mut total = 0.0;
    for &v in b {
        from_left += running + 0.5 * v * dx;
        running += v * dx;
        total += v * dx;
    }
    let from_left = from_left * dx;
    // ∫₀¹∫ₓ¹ b = ∫b - ∫₀¹∫₀ˣ b
    (from_left, total - from_left)
}

fn ub_integral(state: &State, grid: &Grid) -> f64 {
    state
        .b
        .iter()
        .enumerate()
        .map(|(i, &b)| 0.5 * (state.u[i] + state.u[i + 1]) * b)
        .sum::<f64>()
        * grid.dx()
}

/// Residuals of the two wall formulas for `ν b_x(0,t)` and `ν b_x(1,t)`.
///
/// `boundary` holds `(b1, b2)` at the time of `state`.
pub fn boundary_flux_formulas(
    state: &State,
    state_prev: &State,
    grid: &Grid,
    dt: f64,
    nu: f64,
    boundary: (f64, f64),
) -> Result<(f64, f64)> {
    if nu <= 0.0 {
        return Err(Error::invalid(
            "wall formulas apply to the resistive system only",
        ));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    grid.check_cells(state.b.len())?;
    grid.check_cells(state_prev.b.len())?;
    let (b1, b2) = boundary;
    let (bx0, bx1) = wall_gradients(&state.b, grid, boundary);
    let (left_now, right_now) = nested_integrals(&state.b, grid);
    let (left_before, right_before) = nested_integrals(&state_prev.b, grid);
    let ub = ub_integral(state, grid);
    let jump = nu * (b2 - b1);
    let at0 = jump - (left_now - left_before) / dt - ub;
    let at1 = jump + (right_now - right_before) / dt - ub;
    Ok(((nu * bx0 - at0).abs(), (nu * bx1 - at1).abs()))
}

/// L² residuals of `P_t + u P_x + γ P u_x = 0` and
/// `(b²)_t + u (b²)_x + 2 b² u_x = 0`, valid for the non-resistive system.
///
/// Spatial terms use the velocity each stepper stage saw: the old velocity
/// for the density, the new one for the magnetic field.
pub fn transport_residuals(
    state_prev: &State,
    state_next: &State,
    grid: &Grid,
    dt: f64,
    params: &FluidParams,
    nu: f64,
) -> Result<(f64, f64)> {
    if nu != 0.0 {
        return Err(Error::invalid(
            "transport identities hold for the non-resistive system only",
        ));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    grid.check_cells(state_prev.rho.len())?;
    grid.check_cells(state_next.rho.len())?;
    let n = grid.n_cells();
    let dx = grid.dx();
    let gamma = params.gamma();

    let p_prev: Vec<f64> = state_prev.rho.iter().map(|&r| params.p(r)).collect();
    let p_next: Vec<f64> = state_next.rho.iter().map(|&r| params.p(r)).collect();
    let b2_prev: Vec<f64> = state_prev.b.iter().map(|b| b * b).collect();
    let b2_next: Vec<f64> = state_next.b.iter().map(|b| b * b).collect();

    let grad = |f: &[f64], i: usize| -> f64 {
        if i == 0 {
            (f[1] - f[0]) / dx
        } else if i + 1 == n {
            (f[n - 1] - f[n - 2]) / dx
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * dx)
        }
    };

    let mut sp = 0.0;
    let mut sb = 0.0;
    for i in 0..n {
        let (ul, ur) = (state_prev.u[i], state_prev.u[i + 1]);
        let rp = (p_next[i] - p_prev[i]) / dt
            + 0.5 * (ul + ur) * grad(&p_prev, i)
            + gamma * p_prev[i] * (ur - ul) / dx;
        let (ul, ur) = (state_next.u[i], state_next.u[i + 1]);
        let rb = (b2_next[i] - b2_prev[i]) / dt
            + 0.5 * (ul + ur) * grad(&b2_prev, i)
            + 2.0 * b2_prev[i] * (ur - ul) / dx;
        sp += rp * rp;
        sb += rb * rb;
    }
    Ok(((sp * dx).sqrt(), (sb * dx).sqrt()))
}
