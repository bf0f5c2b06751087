//! Magnetic boundary-layer study.
//!
//! Starting from `(ρ̄, 0, 0)` the non-resistive system stays trivial, so
//! the resistive solution itself is the difference to the `ν = 0` limit.
//! The study compares sup norms on the interior `Ω_δ = (δ, 1-δ)` with
//! `δ(ν) = ν^p`, `p < 1/2`, against sup norms on the whole interval.

use crate::boundary::BoundaryMagnetic;
use crate::config::{InitialData, ScenarioConfig};
use crate::diagnostics::ux_l2;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fit::{fit_rate, RateFit};
use crate::grid::Grid;
use crate::limit::sorted_ladder;
use crate::norms::{interior_linf, weighted_h1_integral};
use crate::params::FluidParams;
use crate::solver::run_observed;

pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct LayerScenario {
    pub params: FluidParams,
    pub rho_bar: f64,
    pub boundary_b: BoundaryMagnetic,
    nu_ladder: Vec<f64>,
    delta_exponent: f64,
    epsilon: f64,
    pub t_final: f64,
    pub grid_n: usize,
    pub cfl: f64,
}

impl LayerScenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        params: FluidParams,
        rho_bar: f64,
        boundary_b: BoundaryMagnetic,
        nu_ladder: &[f64],
        delta_exponent: f64,
        epsilon: f64,
        t_final: f64,
        grid_n: usize,
        cfl: f64,
    ) -> Result<Self> {
        if !(delta_exponent > 0.0 && delta_exponent < 0.5) {
            return Err(Error::invalid(format!(
                "delta exponent must lie in (0, 1/2) so that delta(nu)/sqrt(nu) diverges, got {delta_exponent}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        if boundary_b.is_none() {
            return Err(Error::invalid(
                "the layer study needs magnetic boundary data",
            ));
        }
        let nu_ladder = sorted_ladder(nu_ladder)?;
        let scn = Self {
            params,
            rho_bar,
            boundary_b,
            nu_ladder,
            delta_exponent,
            epsilon,
            t_final,
            grid_n,
            cfl,
        };
        // validates rho_bar, T, grid, cfl and the signal
        scn.config(scn.nu_ladder[0])?;
        Ok(scn)
    }

    /// Ramp-to-one signal on both walls with the default fluid.
    pub fn ramp_default(
        nu_ladder: &[f64],
        delta_exponent: f64,
        t_final: f64,
        grid_n: usize,
    ) -> Result<Self> {
        Self::new(
            FluidParams::default(),
            1.0,
            BoundaryMagnetic::Ramp {
                c1: 1.0,
                c2: 1.0,
                t_rise: 0.05,
            },
            nu_ladder,
            delta_exponent,
            DEFAULT_EPSILON,
            t_final,
            grid_n,
            crate::config::DEFAULT_CFL,
        )
    }

    pub fn nu_ladder(&self) -> &[f64] {
        &self.nu_ladder
    }

    pub fn delta_exponent(&self) -> f64 {
        self.delta_exponent
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `δ(ν) = ν^p`.
    pub fn delta(&self, nu: f64) -> f64 {
        nu.powf(self.delta_exponent)
    }

    pub fn config(&self, nu: f64) -> Result<ScenarioConfig> {
        ScenarioConfig::new(
            self.params,
            nu,
            self.grid_n,
            self.t_final,
            InitialData::Constant {
                rho_bar: self.rho_bar,
            },
            self.boundary_b,
            self.cfl,
            vec![self.t_final],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerRow {
    pub nu: f64,
    pub delta: f64,
    /// `sup_t sup_{Ω_δ} |b|`.
    pub interior_b: f64,
    /// `sup_t sup_{Ω_δ} |ρ - ρ̄|`.
    pub interior_rho: f64,
    /// `sup_t max_i |b_i|` over all cell centres.
    pub full_b: f64,
    pub full_rho: f64,
    pub u_sup: f64,
    /// `sup_t ‖u_x‖²`.
    pub ux_sup_sq: f64,
    pub weighted_sup: f64,
    /// ε-level thickness of `b` at `t = T`.
    pub thickness: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// `b` at the cell centres at `t = T`.
    pub b_profile: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerReport {
    pub rows: Vec<LayerRow>,
    pub ux_fit: Option<RateFit>,
    pub weighted_fit: Option<RateFit>,
    pub thickness_fit: Option<RateFit>,
    pub grid_n: usize,
}

fn fit_positive(points: Vec<(f64, f64)>) -> Option<RateFit> {
    if points.len() < 3 || points.iter().any(|p| !(p.1 > 0.0)) {
        return None;
    }
    fit_rate(&points).ok()
}

pub fn run_layer_study(scn: &LayerScenario, exec: Execution) -> Result<LayerReport> {
    let grid = Grid::new(scn.grid_n)?;
    let nu_min = *scn.nu_ladder.last().expect("non-empty ladder");
    let limit = nu_min.sqrt() / 8.0;
    if grid.dx() > limit {
        return Err(Error::invalid(format!(
            "grid under-resolves the smallest layer: dx = {:.3e} > sqrt(nu_min)/8 = {:.3e}",
            grid.dx(),
            limit
        )));
    }
    let results = exec.map(&scn.nu_ladder, |&nu| layer_row(scn, &grid, nu));
    let mut rows = Vec::with_capacity(results.len());
    for (&nu, r) in scn.nu_ladder.iter().zip(results) {
        rows.push(r.map_err(|e| Error::Ladder {
            nu,
            source: Box::new(e),
        })?);
    }
    let col = |f: fn(&LayerRow) -> f64| rows.iter().map(|r| (r.nu, f(r))).collect::<Vec<_>>();
    Ok(LayerReport {
        ux_fit: fit_positive(col(|r| r.ux_sup_sq)),
        weighted_fit: fit_positive(col(|r| r.weighted_sup)),
        thickness_fit: fit_positive(col(|r| r.thickness)),
        rows,
        grid_n: scn.grid_n,
    })
}

fn layer_row(scn: &LayerScenario, grid: &Grid, nu: f64) -> Result<LayerRow> {
    let cfg = scn.config(nu)?;
    let delta = scn.delta(nu);
    let rho_bar = scn.rho_bar;
    let mut row = LayerRow {
        nu,
        delta,
        interior_b: 0.0,
        interior_rho: 0.0,
        full_b: 0.0,
        full_rho: 0.0,
        u_sup: 0.0,
        ux_sup_sq: 0.0,
        weighted_sup: 0.0,
        thickness: 0.0,
        rho_min: rho_bar,
        rho_max: rho_bar,
        b_profile: Vec::new(),
    };
    let mut failure = None;
    let mut deviation = vec![0.0; grid.n_cells()];
    let result = run_observed(&cfg, |ev| {
        let s = ev.next;
        for (d, r) in deviation.iter_mut().zip(&s.rho) {
            *d = r - rho_bar;
        }
        let measured = (|| -> Result<()> {
            row.interior_b = row.interior_b.max(interior_linf(&s.b, grid, delta)?);
            row.interior_rho = row
                .interior_rho
                .max(interior_linf(&deviation, grid, delta)?);
            Ok(())
        })();
        if let Err(e) = measured {
            failure.get_or_insert(e);
        }
        row.full_b = row.full_b.max(s.b_sup());
        row.full_rho = row
            .full_rho
            .max(deviation.iter().fold(0.0, |m, d| m.max(d.abs())));
        row.u_sup = row.u_sup.max(s.u_sup());
        let ux = ux_l2(s, grid);
        row.ux_sup_sq = row.ux_sup_sq.max(ux * ux);
        if let Ok(w) = weighted_h1_integral(&s.rho, &s.b, grid) {
            row.weighted_sup = row.weighted_sup.max(w);
        }
        row.rho_min = row.rho_min.min(s.rho_min());
        row.rho_max = row.rho_max.max(s.rho_max());
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let amplitude = scn.boundary_b.amplitude_at(cfg.t_final);
    let b_final = result.final_state.b;
    row.thickness = if amplitude > 0.0 {
        thickness_estimate(&b_final, grid, amplitude, scn.epsilon)?
    } else {
        0.0
    };
    row.b_profile = b_final;
    Ok(row)
}

/// Smallest `δ = k dx` with `sup_{Ω_δ} |b| ≤ ε · amplitude`; `1/2` when the
/// profile never drops below the threshold.
pub fn thickness_estimate(
    b_profile: &[f64],
    grid: &Grid,
    boundary_amplitude: f64,
    epsilon: f64,
) -> Result<f64> {
    if !(boundary_amplitude > 0.0) {
        return Err(Error::Domain(format!(
            "boundary amplitude must be > 0, got {boundary_amplitude}"
        )));
    }
    grid.check_cells(b_profile.len())?;
    let n = grid.n_cells();
    let threshold = epsilon * boundary_amplitude;
    // For δ = k dx the admitted centres are cells k..=n-1-k; the interior
    // max is non-increasing in k, so scan from the middle outwards.
    let k_max = (n - 1) / 2;
    let mut inner = vec![0.0f64; k_max + 1];
    let mut m = 0.0f64;
    for k in (0..=k_max).rev() {
        m = m.max(b_profile[k].abs()).max(b_profile[n - 1 - k].abs());
        inner[k] = m;
    }
    Ok(inner
        .iter()
        .position(|&v| v <= threshold)
        .map_or(0.5, |k| k as f64 * grid.dx()))
}

/// Fitted exponent of `sup_t ‖u_x‖²` against `ν`; `None` when the column
/// vanishes (trivial forcing).
pub fn velocity_no_layer_check(report: &LayerReport) -> Result<Option<f64>> {
    if report.rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "velocity check needs at least 3 ladder points, got {}",
            report.rows.len()
        )));
    }
    if report.rows.iter().all(|r| r.ux_sup_sq == 0.0) {
        return Ok(None);
    }
    let pts: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.nu, r.ux_sup_sq)).collect();
    Ok(Some(fit_rate(&pts)?.exponent))
}
