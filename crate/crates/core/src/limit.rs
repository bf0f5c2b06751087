//! Vanishing-resistivity sweeps.
//!
//! Each ladder entry `ν` is integrated in lockstep with the non-resistive
//! reference from the same data on the same grid: both share every time
//! step, so differences are pointwise and free of time-lattice mismatch.
//! Sup-in-time norms are taken over a fixed set of comparison times.

use crate::boundary::BoundaryMagnetic;
use crate::config::{uniform_times, ScenarioConfig};
use crate::diagnostics::ux_l2;
use crate::error::{Error, Result};
use crate::exec::Execution;
pub use crate::fit::{fit_rate, RateFit};
use crate::grid::{restrict_cells, restrict_faces, Grid};
use crate::norms::{l2_distance, weighted_h1_integral};
use crate::solver::{clamp_to_stop, run, stable_dt, Stepper};
use crate::state::State;

/// Default number of uniform comparison times.
pub const DEFAULT_COMPARISON_TIMES: usize = 32;

/// Points whose difference norm is within this factor of the estimated
/// discretization error are treated as saturated.
pub const SATURATION_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    base: ScenarioConfig,
    reference: ScenarioConfig,
    nu_ladder: Vec<f64>,
    comparison_times: Vec<f64>,
    estimate_discretization: bool,
}

impl SweepSpec {
    /// `base` carries the grid, data, horizon and the magnetic boundary
    /// signal of the resistive runs; its own `nu` is ignored.
    pub fn new(
        base: &ScenarioConfig,
        boundary_b: BoundaryMagnetic,
        nu_ladder: &[f64],
        comparison_times: Option<Vec<f64>>,
    ) -> Result<Self> {
        if boundary_b.is_none() {
            return Err(Error::invalid("resistive runs need magnetic boundary data"));
        }
        let ladder = sorted_ladder(nu_ladder)?;
        let resistive = base.with_resistivity(ladder[0], boundary_b)?;
        let mut reference = base.with_resistivity(0.0, BoundaryMagnetic::None)?;
        let mut times = comparison_times
            .unwrap_or_else(|| uniform_times(base.t_final, DEFAULT_COMPARISON_TIMES));
        times.sort_by(f64::total_cmp);
        times.dedup();
        if times.is_empty() {
            return Err(Error::invalid("at least one comparison time is required"));
        }
        if let Some(&t) = times.iter().find(|&&t| !(t > 0.0 && t <= base.t_final)) {
            return Err(Error::invalid(format!(
                "comparison time {t} outside (0, T]"
            )));
        }
        reference.snapshot_times = times.clone();
        Ok(Self {
            base: resistive,
            reference,
            nu_ladder: ladder,
            comparison_times: times,
            estimate_discretization: true,
        })
    }

    /// Skips the `n` vs `2n` reference runs used to detect saturated points.
    pub fn without_discretization_estimate(mut self) -> Self {
        self.estimate_discretization = false;
        self
    }

    pub fn nu_ladder(&self) -> &[f64] {
        &self.nu_ladder
    }

    pub fn comparison_times(&self) -> &[f64] {
        &self.comparison_times
    }

    pub fn reference(&self) -> &ScenarioConfig {
        &self.reference
    }

    pub fn resistive(&self, nu: f64) -> Result<ScenarioConfig> {
        self.base.with_resistivity(nu, self.base.boundary_b)
    }
}

/// Ladder sorted by decreasing `ν`, every entry in `(0, 1)`.
pub fn sorted_ladder(nu_ladder: &[f64]) -> Result<Vec<f64>> {
    if nu_ladder.is_empty() {
        return Err(Error::invalid("empty resistivity ladder"));
    }
    if let Some(&nu) = nu_ladder.iter().find(|&&nu| !(nu > 0.0 && nu < 1.0)) {
        return Err(Error::invalid(format!(
            "ladder entries must lie in (0,1), got {nu}"
        )));
    }
    let mut ladder = nu_ladder.to_vec();
    ladder.sort_by(|a, b| b.total_cmp(a));
    ladder.dedup();
    Ok(ladder)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub nu: f64,
    /// `sup_t ‖ρ^ν - ρ‖_{L²}`.
    pub rho_diff: f64,
    pub u_diff: f64,
    pub b_diff: f64,
    /// `∫₀ᵀ ‖(u^ν - u)_x‖² dt`.
    pub ux_diff_integral: f64,
    /// `sup_t ‖u^ν_x‖²`.
    pub ux_sup_sq: f64,
    /// `sup_t ∫ ξ (ρ_x² + b_x²)` of the resistive run.
    pub weighted_sup: f64,
}

/// Report columns that get a power-law fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepColumn {
    Rho,
    U,
    B,
    UxDiffIntegral,
    UxSupSq,
    Weighted,
}

impl SweepColumn {
    pub const ALL: [SweepColumn; 6] = [
        SweepColumn::Rho,
        SweepColumn::U,
        SweepColumn::B,
        SweepColumn::UxDiffIntegral,
        SweepColumn::UxSupSq,
        SweepColumn::Weighted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepColumn::Rho => "rho_diff",
            SweepColumn::U => "u_diff",
            SweepColumn::B => "b_diff",
            SweepColumn::UxDiffIntegral => "ux_diff_integral",
            SweepColumn::UxSupSq => "ux_sup_sq",
            SweepColumn::Weighted => "weighted_sup",
        }
    }

    pub fn value(&self, row: &SweepRow) -> f64 {
        match self {
            SweepColumn::Rho => row.rho_diff,
            SweepColumn::U => row.u_diff,
            SweepColumn::B => row.b_diff,
            SweepColumn::UxDiffIntegral => row.ux_diff_integral,
            SweepColumn::UxSupSq => row.ux_sup_sq,
            SweepColumn::Weighted => row.weighted_sup,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnFit {
    pub fit: RateFit,
    pub points_used: usize,
    /// The smallest-ν point was excluded as saturated by discretization error.
    pub dropped_smallest: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Sorted by decreasing `ν`.
    pub rows: Vec<SweepRow>,
    /// One entry per [`SweepColumn::ALL`]; `None` when no fit applies.
    pub fits: Vec<(SweepColumn, Option<ColumnFit>)>,
    /// `sup_t ‖run(n) - run(2n)‖` of the reference for `(ρ, u, b)`.
    pub discretization_error: Option<[f64; 3]>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    pub fn fit(&self, column: SweepColumn) -> Option<&ColumnFit> {
        self.fits
            .iter()
            .find(|(c, _)| *c == column)
            .and_then(|(_, f)| f.as_ref())
    }
}

/// Runs the reference/resistive pairs for every ladder entry and fits the
/// difference norms against `ν`.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<SweepReport> {
    let mut warnings = Vec::new();
    let grid = spec.base.grid();
    let nu_min = *spec.nu_ladder.last().expect("non-empty ladder");
    let layer = (nu_min * spec.base.t_final).sqrt();
    if grid.dx() > 0.25 * layer {
        warnings.push(format!(
            "grid may not resolve the smallest layer: dx = {:.3e}, sqrt(nu_min T) = {:.3e}",
            grid.dx(),
            layer
        ));
    }

    // jobs: one per ladder entry, plus the discretization estimate
    let mut jobs: Vec<Option<f64>> = spec.nu_ladder.iter().map(|&nu| Some(nu)).collect();
    if spec.estimate_discretization {
        jobs.push(None);
    }
    let outcomes = exec.map(&jobs, |job| match *job {
        Some(nu) => run_pair(spec, nu).map(Outcome::Row),
        None => discretization_error(&spec.reference).map(Outcome::Discretization),
    });

    let mut rows = Vec::with_capacity(spec.nu_ladder.len());
    let mut disc = None;
    for (job, outcome) in jobs.iter().zip(outcomes) {
        match (job, outcome) {
            (_, Ok(Outcome::Row(r))) => rows.push(r),
            (_, Ok(Outcome::Discretization(d))) => disc = Some(d),
            (Some(nu), Err(e)) => {
                return Err(Error::Ladder {
                    nu: *nu,
                    source: Box::new(e),
                })
            }
            (None, Err(e)) => {
                return Err(Error::Ladder {
                    nu: 0.0,
                    source: Box::new(e),
                })
            }
        }
    }

    let fits = SweepColumn::ALL
        .iter()
        .map(|&col| {
            let threshold = disc.and_then(|d| match col {
                SweepColumn::Rho => Some(d[0]),
                SweepColumn::U => Some(d[1]),
                SweepColumn::B => Some(d[2]),
                _ => None,
            });
            (col, fit_column(&rows, col, threshold))
        })
        .collect();
    if rows.len() < 3 {
        warnings.push(format!(
            "{} ladder point(s): exponent fits need at least 3",
            rows.len()
        ));
    }
    Ok(SweepReport {
        rows,
        fits,
        discretization_error: disc,
        warnings,
    })
}

enum Outcome {
    Row(SweepRow),
    Discretization([f64; 3]),
}

/// Fit of one column, or `None` when fewer than 3 positive values remain.
fn fit_column(rows: &[SweepRow], col: SweepColumn, saturation: Option<f64>) -> Option<ColumnFit> {
    let mut pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.nu, col.value(r))).collect();
    if pts.len() < 3 || pts.iter().any(|p| !(p.1 > 0.0)) {
        return None;
    }
    let mut dropped = false;
    if let Some(err) = saturation {
        // rows are sorted by decreasing nu, so the last one is the smallest
        if pts.len() > 3 && pts[pts.len() - 1].1 <= SATURATION_FACTOR * err {
            pts.pop();
            dropped = true;
        }
    }
    fit_rate(&pts).ok().map(|fit| ColumnFit {
        fit,
        points_used: pts.len(),
        dropped_smallest: dropped,
    })
}

fn ux_diff_sq(a: &State, b: &State, grid: &Grid) -> f64 {
    let dx = grid.dx();
    let s: f64 =
        a.u.windows(2)
            .zip(b.u.windows(2))
            .map(|(wa, wb)| {
                let d = (wa[1] - wa[0]) - (wb[1] - wb[0]);
                d * d
            })
            .sum();
    s / dx
}

/// Lockstep integration of the resistive run at `nu` and the reference.
fn run_pair(spec: &SweepSpec, nu: f64) -> Result<SweepRow> {
    let res_cfg = spec.resistive(nu)?;
    let grid = res_cfg.grid();
    let params = res_cfg.params;
    let boundary = res_cfg.boundary_b;
    let mut res_stepper = Stepper::new(grid.clone(), params, nu)?;
    let mut ref_stepper = Stepper::new(grid.clone(), params, 0.0)?;
    let mut res = res_cfg.initial_state();
    let mut reference = spec.reference.initial_state();

    let mut row = SweepRow {
        nu,
        rho_diff: 0.0,
        u_diff: 0.0,
        b_diff: 0.0,
        ux_diff_integral: 0.0,
        ux_sup_sq: 0.0,
        weighted_sup: 0.0,
    };
    let mut g = ux_diff_sq(&res, &reference, &grid);
    let t_final = res_cfg.t_final;
    let mut stops = spec.comparison_times.iter().copied().peekable();

    while res.time < t_final {
        let stop = stops.peek().copied().unwrap_or(t_final);
        let raw = stable_dt(&res, &grid, &params, res_cfg.cfl)?.min(stable_dt(
            &reference,
            &grid,
            &params,
            res_cfg.cfl,
        )?);
        let (dt, lands) = clamp_to_stop(res.time, raw, stop);
        let t_new = if lands { stop } else { res.time + dt };
        let mut next_res = res_stepper.advance(&res, dt, boundary.values(t_new), None)?;
        let mut next_ref = ref_stepper.advance(&reference, dt, None, None)?;
        next_res.time = t_new;
        next_ref.time = t_new;

        let g_next = ux_diff_sq(&next_res, &next_ref, &grid);
        row.ux_diff_integral += 0.5 * dt * (g + g_next);
        g = g_next;

        if lands && stops.peek().is_some() {
            stops.next();
            row.rho_diff = row
                .rho_diff
                .max(l2_distance(&next_res.rho, &next_ref.rho, &grid)?);
            row.u_diff = row
                .u_diff
                .max(l2_distance(&next_res.u, &next_ref.u, &grid)?);
            row.b_diff = row
                .b_diff
                .max(l2_distance(&next_res.b, &next_ref.b, &grid)?);
            let ux = ux_l2(&next_res, &grid);
            row.ux_sup_sq = row.ux_sup_sq.max(ux * ux);
            row.weighted_sup =
                row.weighted_sup
                    .max(weighted_h1_integral(&next_res.rho, &next_res.b, &grid)?);
        }
        res = next_res;
        reference = next_ref;
    }
    Ok(row)
}

/// `sup_t ‖run(n) - R run(2n)‖` for `(ρ, u, b)` over the snapshot times of
/// `config`, with `R` the cell-average (faces: injection) restriction.
pub fn discretization_error(config: &ScenarioConfig) -> Result<[f64; 3]> {
    let coarse = run(config)?;
    let fine = run(&config.with_grid(2 * config.grid_n)?)?;
    let grid = config.grid();
    let mut err = [0.0f64; 3];
    for (c, f) in coarse.snapshots.iter().zip(&fine.snapshots) {
        let (a, b) = (&c.state, &f.state);
        err[0] = err[0].max(l2_distance(&a.rho, &restrict_cells(&b.rho, 2)?, &grid)?);
        err[1] = err[1].max(l2_distance(&a.u, &restrict_faces(&b.u, 2)?, &grid)?);
        err[2] = err[2].max(l2_distance(&a.b, &restrict_cells(&b.b, 2)?, &grid)?);
    }
    Ok(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InitialData;

    fn trivial_spec(ladder: &[f64]) -> SweepSpec {
        let base = ScenarioConfig::simple(
            0.0,
            64,
            0.2,
            InitialData::Constant { rho_bar: 1.3 },
            BoundaryMagnetic::None,
        )
        .unwrap();
        SweepSpec::new(
            &base,
            BoundaryMagnetic::Constant { c1: 0.0, c2: 0.0 },
            ladder,
            None,
        )
        .unwrap()
    }

    #[test]
    fn ladder_validation() {
        assert_eq!(
            sorted_ladder(&[1e-3, 1e-2, 1e-4]).unwrap(),
            vec![1e-2, 1e-3, 1e-4]
        );
        assert!(sorted_ladder(&[]).is_err());
        assert!(sorted_ladder(&[1e-2, 1.0]).is_err());
        assert!(sorted_ladder(&[0.0]).is_err());
    }

    #[test]
    fn trivial_sweep_is_zero() {
        let spec = trivial_spec(&[1e-2, 1e-3, 1e-4]);
        let report = run_sweep(&spec, Execution::default()).unwrap();
        assert_eq!(report.rows.len(), 3);
        for r in &report.rows {
            for col in SweepColumn::ALL {
                assert!(col.value(r) <= 1e-10, "{} = {}", col.name(), col.value(r));
            }
        }
        assert!(report.fits.iter().all(|(_, f)| f.is_none()));
    }

    #[test]
    fn single_point_ladder_has_no_fit() {
        let spec = trivial_spec(&[1e-3]).without_discretization_estimate();
        let report = run_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(report.fits.iter().all(|(_, f)| f.is_none()));
        assert!(report.warnings.iter().any(|w| w.contains("at least 3")));
    }

    #[test]
    fn spec_rejects_missing_boundary_data() {
        let base = ScenarioConfig::simple(
            0.0,
            32,
            0.1,
            InitialData::Constant { rho_bar: 1.0 },
            BoundaryMagnetic::None,
        )
        .unwrap();
        assert!(SweepSpec::new(&base, BoundaryMagnetic::None, &[1e-2], None).is_err());
        assert!(SweepSpec::new(
            &base,
            BoundaryMagnetic::Constant { c1: 0.0, c2: 0.0 },
            &[1e-2],
            Some(vec![0.5])
        )
        .is_err());
    }

    #[test]
    fn saturated_smallest_point_is_dropped() {
        let rows: Vec<SweepRow> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&nu| SweepRow {
                nu,
                rho_diff: nu,
                u_diff: nu,
                b_diff: nu,
                ux_diff_integral: nu,
                ux_sup_sq: nu,
                weighted_sup: nu,
            })
            .collect();
        let f = fit_column(&rows, SweepColumn::B, Some(2e-6)).unwrap();
        assert!(f.dropped_smallest);
        assert_eq!(f.points_used, 3);
        let f = fit_column(&rows, SweepColumn::B, Some(1e-8)).unwrap();
        assert!(!f.dropped_smallest);
        assert!((f.fit.exponent - 1.0).abs() < 1e-12);
    }
}
