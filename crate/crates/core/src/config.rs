//! Scenario description: which system, which data, which horizon.

use std::f64::consts::PI;

use crate::boundary::BoundaryMagnetic;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::FluidParams;
use crate::state::State;

/// Initial-data presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// `(rho_bar, 0, 0)`.
    Constant { rho_bar: f64 },
    /// `rho = rho_bar + rho_amp sin(rho_mode π x)`,
    /// `u = u_amp sin(u_mode π x)`, `b = b_amp sin(b_mode π x)`.
    Sine {
        rho_bar: f64,
        rho_amp: f64,
        rho_mode: u32,
        u_amp: f64,
        u_mode: u32,
        b_amp: f64,
        b_mode: u32,
    },
}

impl InitialData {
    /// The smooth profile `rho = 1 + 0.1 sin(2πx)`, `u = 0`, `b = 0.1 sin(πx)`.
    pub fn smooth_default() -> Self {
        InitialData::Sine {
            rho_bar: 1.0,
            rho_amp: 0.1,
            rho_mode: 2,
            u_amp: 0.0,
            u_mode: 1,
            b_amp: 0.1,
            b_mode: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InitialData::Constant { rho_bar } => {
                if rho_bar > 0.0 && rho_bar.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "rho_bar must be > 0, got {rho_bar}"
                    )))
                }
            }
            InitialData::Sine {
                rho_bar,
                rho_amp,
                u_amp,
                b_amp,
                ..
            } => {
                if ![rho_bar, rho_amp, u_amp, b_amp]
                    .iter()
                    .all(|v| v.is_finite())
                {
                    return Err(Error::invalid("initial profile parameters must be finite"));
                }
                if rho_bar - rho_amp.abs() <= 0.0 {
                    return Err(Error::invalid(format!(
                        "initial density must stay positive: rho_bar = {rho_bar}, rho_amp = {rho_amp}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn rho_bar(&self) -> f64 {
        match *self {
            InitialData::Constant { rho_bar } | InitialData::Sine { rho_bar, .. } => rho_bar,
        }
    }

    /// True for the constant state `(rho_bar, 0, 0)`.
    pub fn is_trivial(&self) -> bool {
        match *self {
            InitialData::Constant { .. } => true,
            InitialData::Sine {
                rho_amp,
                u_amp,
                b_amp,
                ..
            } => rho_amp == 0.0 && u_amp == 0.0 && b_amp == 0.0,
        }
    }

    /// Samples the profile on `grid` at `t = 0`.
    pub fn state(&self, grid: &Grid) -> State {
        match *self {
            InitialData::Constant { rho_bar } => State::uniform(grid, rho_bar),
            InitialData::Sine {
                rho_bar,
                rho_amp,
                rho_mode,
                u_amp,
                u_mode,
                b_amp,
                b_mode,
            } => {
                let kr = rho_mode as f64 * PI;
                let ku = u_mode as f64 * PI;
                let kb = b_mode as f64 * PI;
                let mut u = grid.sample_faces(|x| u_amp * (ku * x).sin());
                let n = u.len();
                u[0] = 0.0;
                u[n - 1] = 0.0;
                State {
                    rho: grid.sample_cells(|x| rho_bar + rho_amp * (kr * x).sin()),
                    u,
                    b: grid.sample_cells(|x| b_amp * (kb * x).sin()),
                    time: 0.0,
                }
            }
        }
    }

    /// The same profile reflected through `x = 1/2` (velocity flips sign).
    pub fn mirrored(&self) -> Self {
        // sin(kπ(1 - x)) = (-1)^(k+1) sin(kπx)
        let parity = |k: u32| if k % 2 == 1 { 1.0 } else { -1.0 };
        match *self {
            InitialData::Constant { .. } => *self,
            InitialData::Sine {
                rho_bar,
                rho_amp,
                rho_mode,
                u_amp,
                u_mode,
                b_amp,
                b_mode,
            } => InitialData::Sine {
                rho_bar,
                rho_amp: rho_amp * parity(rho_mode),
                rho_mode,
                u_amp: -u_amp * parity(u_mode),
                u_mode,
                b_amp: b_amp * parity(b_mode),
                b_mode,
            },
        }
    }
}

/// Full description of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: FluidParams,
    pub nu: f64,
    pub grid_n: usize,
    pub t_final: f64,
    pub initial: InitialData,
    pub boundary_b: BoundaryMagnetic,
    pub cfl: f64,
    pub snapshot_times: Vec<f64>,
}

pub const DEFAULT_CFL: f64 = 0.4;

impl ScenarioConfig {
    /// Validated configuration; `snapshot_times` is sorted and deduplicated.
    pub fn new(
        params: FluidParams,
        nu: f64,
        grid_n: usize,
        t_final: f64,
        initial: InitialData,
        boundary_b: BoundaryMagnetic,
        cfl: f64,
        mut snapshot_times: Vec<f64>,
    ) -> Result<Self> {
        snapshot_times.sort_by(f64::total_cmp);
        snapshot_times.dedup();
        let cfg = Self {
            params,
            nu,
            grid_n,
            t_final,
            initial,
            boundary_b,
            cfl,
            snapshot_times,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults for everything except the physics choice; one snapshot at `T`.
    pub fn simple(
        nu: f64,
        grid_n: usize,
        t_final: f64,
        initial: InitialData,
        boundary_b: BoundaryMagnetic,
    ) -> Result<Self> {
        Self::new(
            FluidParams::default(),
            nu,
            grid_n,
            t_final,
            initial,
            boundary_b,
            DEFAULT_CFL,
            vec![t_final],
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::invalid(format!("nu must be >= 0, got {}", self.nu)));
        }
        if self.nu == 0.0 && !self.boundary_b.is_none() {
            return Err(Error::invalid("nu=0 requires boundary kind none"));
        }
        if self.nu > 0.0 && self.boundary_b.is_none() {
            return Err(Error::invalid("nu>0 requires magnetic boundary data"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::invalid(format!(
                "T must be > 0, got {}",
                self.t_final
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::invalid(format!(
                "cfl must lie in (0,1), got {}",
                self.cfl
            )));
        }
        if let Some(&t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(0.0..=self.t_final).contains(&t))
        {
            return Err(Error::invalid(format!("snapshot time {t} outside [0, T]")));
        }
        Grid::new(self.grid_n)?;
        self.boundary_b.validate()?;
        self.initial.validate()
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid_n).expect("validated grid size")
    }

    pub fn is_resistive(&self) -> bool {
        self.nu > 0.0
    }

    pub fn initial_state(&self) -> State {
        self.initial.state(&self.grid())
    }

    /// Copy with a different resistivity and boundary signal.
    pub fn with_resistivity(&self, nu: f64, boundary_b: BoundaryMagnetic) -> Result<Self> {
        let mut c = self.clone();
        c.nu = nu;
        c.boundary_b = boundary_b;
        c.validate()?;
        Ok(c)
    }

    /// The reflected problem `x ↦ 1 - x`.
    pub fn mirrored(&self) -> Self {
        let mut c = self.clone();
        c.initial = self.initial.mirrored();
        c.boundary_b = self.boundary_b.mirrored();
        c
    }

    pub fn with_grid(&self, grid_n: usize) -> Result<Self> {
        let mut c = self.clone();
        c.grid_n = grid_n;
        c.validate()?;
        Ok(c)
    }
}

/// `count` uniform times `T/count, 2T/count, ..., T`.
pub fn uniform_times(t_final: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| {
            if k == count {
                t_final
            } else {
                t_final * k as f64 / count as f64
            }
        })
        .collect()
}
