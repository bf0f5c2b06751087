//! Manufactured solutions and the grid-ladder order study.
//!
//! Sources are closed-form derivatives of the manufactured fields, written
//! out by hand. The momentum source is taken for the velocity form
//! `ρ(u_t + u u_x) + P_x + b b_x - λ u_xx` that the stepper discretises.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::Grid;
use crate::norms::l2_distance;
use crate::params::FluidParams;
use crate::solver::{clamp_to_stop, stable_dt, SourceTerms, Stepper};
use crate::state::State;

/// Errors at or below this level count as exact.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// Closed-form fields with `ρ > 0` and `u = 0` on both walls, plus the
/// sources they induce.
pub trait ManufacturedCase: Sync {
    fn params(&self) -> FluidParams;
    fn rho(&self, x: f64, t: f64) -> f64;
    fn u(&self, x: f64, t: f64) -> f64;
    fn b(&self, x: f64, t: f64) -> f64;
    fn source_rho(&self, x: f64, t: f64) -> f64;
    fn source_u(&self, x: f64, t: f64) -> f64;
    /// Induction source for resistivity `nu` (`nu = 0`: pure advection).
    fn source_b(&self, x: f64, t: f64, nu: f64) -> f64;

    fn state(&self, grid: &Grid, t: f64) -> State {
        let mut u = grid.sample_faces(|x| self.u(x, t));
        let n = u.len();
        u[0] = 0.0;
        u[n - 1] = 0.0;
        State {
            rho: grid.sample_cells(|x| self.rho(x, t)),
            u,
            b: grid.sample_cells(|x| self.b(x, t)),
            time: t,
        }
    }
}

/// The constant state `(ρ̄, 0, 0)`; every source vanishes.
#[derive(Debug, Clone, Copy)]
pub struct ConstantCase {
    pub params: FluidParams,
    pub rho_bar: f64,
}

impl ManufacturedCase for ConstantCase {
    fn params(&self) -> FluidParams {
        self.params
    }
    fn rho(&self, _x: f64, _t: f64) -> f64 {
        self.rho_bar
    }
    fn u(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn b(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn source_rho(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn source_u(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
    fn source_b(&self, _x: f64, _t: f64, _nu: f64) -> f64 {
        0.0
    }
}

/// `ρ = 2 + 0.1 sin(2πx) e^{-t}`, `u = 0.1 sin²(πx) e^{-t}`,
/// `b = 0.1 cos(πx) e^{-t}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecayingTrigCase {
    pub params: FluidParams,
}

impl DecayingTrigCase {
    // (value, x-derivative, second x-derivative) of each field
    fn rho_parts(x: f64, t: f64) -> (f64, f64) {
        let e = (-t).exp();
        let v = 2.0 + 0.1 * (2.0 * PI * x).sin() * e;
        let dx = 0.2 * PI * (2.0 * PI * x).cos() * e;
        (v, dx)
    }

    fn u_parts(x: f64, t: f64) -> (f64, f64, f64) {
        let e = (-t).exp();
        let s = (PI * x).sin();
        let v = 0.1 * s * s * e;
        let dx = 0.1 * PI * (2.0 * PI * x).sin() * e;
        let dxx = 0.2 * PI * PI * (2.0 * PI * x).cos() * e;
        (v, dx, dxx)
    }

    fn b_parts(x: f64, t: f64) -> (f64, f64, f64) {
        let e = (-t).exp();
        let v = 0.1 * (PI * x).cos() * e;
        let dx = -0.1 * PI * (PI * x).sin() * e;
        let dxx = -0.1 * PI * PI * (PI * x).cos() * e;
        (v, dx, dxx)
    }
}

impl ManufacturedCase for DecayingTrigCase {
    fn params(&self) -> FluidParams {
        self.params
    }
    fn rho(&self, x: f64, t: f64) -> f64 {
        Self::rho_parts(x, t).0
    }
    fn u(&self, x: f64, t: f64) -> f64 {
        Self::u_parts(x, t).0
    }
    fn b(&self, x: f64, t: f64) -> f64 {
        Self::b_parts(x, t).0
    }

    fn source_rho(&self, x: f64, t: f64) -> f64 {
        let (rho, rho_x) = Self::rho_parts(x, t);
        let (u, u_x, _) = Self::u_parts(x, t);
        // every field decays like e^{-t}
        let rho_t = -(rho - 2.0);
        rho_t + u * rho_x + rho * u_x
    }

    fn source_u(&self, x: f64, t: f64) -> f64 {
        let (rho, rho_x) = Self::rho_parts(x, t);
        let (u, u_x, u_xx) = Self::u_parts(x, t);
        let (b, b_x, _) = Self::b_parts(x, t);
        let p = &self.params;
        let p_x = p.a() * p.gamma() * rho.powf(p.gamma() - 1.0) * rho_x;
        rho * (-u + u * u_x) + p_x + b * b_x - p.lambda() * u_xx
    }

    fn source_b(&self, x: f64, t: f64, nu: f64) -> f64 {
        let (u, u_x, _) = Self::u_parts(x, t);
        let (b, b_x, b_xx) = Self::b_parts(x, t);
        -b + u_x * b + u * b_x - nu * b_xx
    }
}

struct Forcing<'a, C: ManufacturedCase + ?Sized> {
    case: &'a C,
    nu: f64,
}

impl<C: ManufacturedCase + ?Sized> SourceTerms for Forcing<'_, C> {
    fn continuity(&self, x: f64, t: f64) -> f64 {
        self.case.source_rho(x, t)
    }
    fn momentum(&self, x: f64, t: f64) -> f64 {
        self.case.source_u(x, t)
    }
    fn induction(&self, x: f64, t: f64) -> f64 {
        self.case.source_b(x, t, self.nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum System {
    Resistive { nu: f64 },
    NonResistive,
}

impl System {
    pub fn nu(&self) -> f64 {
        match *self {
            System::Resistive { nu } => nu,
            System::NonResistive => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    /// Both errors at round-off level.
    Exact,
    Measured(f64),
}

impl Order {
    fn between(coarse: f64, fine: f64) -> Self {
        if coarse <= EXACT_TOLERANCE && fine <= EXACT_TOLERANCE {
            Order::Exact
        } else {
            Order::Measured((coarse / fine).log2())
        }
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        match *self {
            Order::Exact => true,
            Order::Measured(p) => p >= lo && p <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmsReport {
    pub system: System,
    pub grids: Vec<usize>,
    /// `(ρ, u, b)` L² errors at `T` per grid.
    pub errors: Vec<[f64; 3]>,
    /// Orders between consecutive grids.
    pub orders: Vec<[Order; 3]>,
    /// Errors decrease along the ladder for every field (or stay exact).
    pub monotone: bool,
}

impl MmsReport {
    /// Monotone errors and every order inside `[lo, hi]`.
    pub fn passes(&self, lo: f64, hi: f64) -> bool {
        self.monotone && self.orders.iter().flatten().all(|o| o.within(lo, hi))
    }
}

/// Integrates the forced system on one grid and returns the L² errors.
pub fn mms_errors<C: ManufacturedCase + ?Sized>(
    case: &C,
    system: System,
    grid_n: usize,
    t_final: f64,
    cfl: f64,
) -> Result<[f64; 3]> {
    let grid = Grid::new(grid_n)?;
    let params = case.params();
    let nu = system.nu();
    let forcing = Forcing { case, nu };
    let mut stepper = Stepper::new(grid.clone(), params, nu)?;
    let mut state = case.state(&grid, 0.0);
    while state.time < t_final {
        let raw = stable_dt(&state, &grid, &params, cfl)?;
        let (dt, lands) = clamp_to_stop(state.time, raw, t_final);
        let t_new = if lands { t_final } else { state.time + dt };
        let boundary = match system {
            System::Resistive { .. } => Some((case.b(0.0, t_new), case.b(1.0, t_new))),
            System::NonResistive => None,
        };
        state = stepper.advance(&state, dt, boundary, Some(&forcing))?;
        state.time = t_new;
    }
    let exact = case.state(&grid, t_final);
    Ok([
        l2_distance(&state.rho, &exact.rho, &grid)?,
        l2_distance(&state.u, &exact.u, &grid)?,
        l2_distance(&state.b, &exact.b, &grid)?,
    ])
}

/// Observed orders `log2(e(n)/e(2n))` over a ladder of doubling grids.
pub fn mms_order_study<C: ManufacturedCase + ?Sized>(
    case: &C,
    system: System,
    grid_ladder: &[usize],
    t_final: f64,
    exec: Execution,
) -> Result<MmsReport> {
    if grid_ladder.len() < 2 {
        return Err(Error::InsufficientData(
            "order study needs at least 2 grids".into(),
        ));
    }
    if grid_ladder.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::invalid("grid ladder must double at every level"));
    }
    if let System::Resistive { nu } = system {
        if !(nu > 0.0) {
            return Err(Error::invalid("resistive study needs nu > 0"));
        }
    }
    let results = exec.map(grid_ladder, |&n| {
        mms_errors(case, system, n, t_final, crate::config::DEFAULT_CFL)
    });
    let errors = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut orders = Vec::with_capacity(errors.len() - 1);
    let mut monotone = true;
    for w in errors.windows(2) {
        let mut o = [Order::Exact; 3];
        for k in 0..3 {
            o[k] = Order::between(w[0][k], w[1][k]);
            if o[k] != Order::Exact && !(w[1][k] < w[0][k]) {
                monotone = false;
            }
        }
        orders.push(o);
    }
    Ok(MmsReport {
        system,
        grids: grid_ladder.to_vec(),
        errors,
        orders,
        monotone,
    })
}
