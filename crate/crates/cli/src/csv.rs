//! Deterministic CSV emission: 17 significant digits, `.` decimal
//! separator, `\n` line endings, one header line.

use std::fmt::Write as _;
use std::path::Path;

use mhd1d_core::diagnostics::InvariantRecord;
use mhd1d_core::layer::LayerReport;
use mhd1d_core::limit::SweepReport;
use mhd1d_core::{Grid, State};

use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(out: &mut String, values: &[f64]) {
    let line: Vec<String> = values.iter().map(|&v| num(v)).collect();
    out.push_str(&line.join(","));
    out.push('\n');
}

/// Columns `x, rho, u, b`; `u` is the face value on the left of each cell
/// (the right wall face is always zero).
pub fn snapshot(grid: &Grid, state: &State) -> String {
    let mut out = String::from("x,rho,u,b\n");
    for i in 0..grid.n_cells() {
        row(
            &mut out,
            &[grid.center(i), state.rho[i], state.u[i], state.b[i]],
        );
    }
    out
}

/// Inverse of [`snapshot`].
pub fn parse_snapshot(text: &str, time: f64) -> Result<(Grid, State), String> {
    let mut lines = text.lines();
    if lines.next() != Some("x,rho,u,b") {
        return Err("missing header 'x,rho,u,b'".into());
    }
    let (mut rho, mut u, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("row {}: {e}", k + 2))?;
        if vals.len() != 4 {
            return Err(format!(
                "row {}: expected 4 columns, got {}",
                k + 2,
                vals.len()
            ));
        }
        rho.push(vals[1]);
        u.push(vals[2]);
        b.push(vals[3]);
    }
    u.push(0.0);
    let grid = Grid::new(rho.len()).map_err(|e| e.to_string())?;
    let state = State::new(&grid, rho, u, b, time).map_err(|e| e.to_string())?;
    Ok((grid, state))
}

pub fn read_snapshot(path: &Path, time: f64) -> Result<(Grid, State), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_snapshot(&text, time)
        .map_err(|m| CliError::config(None, format!("{}: {m}", path.display())))
}

pub fn invariants(records: &[InvariantRecord]) -> String {
    let mut out =
        String::from("time,total_mass,energy,dissipation_accum,rho_min,rho_max,b_sup,ux_l2\n");
    for r in records {
        row(
            &mut out,
            &[
                r.time,
                r.total_mass,
                r.energy,
                r.dissipation_accum,
                r.rho_min,
                r.rho_max,
                r.b_sup,
                r.ux_l2,
            ],
        );
    }
    out
}

fn fit_line(out: &mut String, column: &str, fit: Option<(f64, f64, f64, usize)>) {
    match fit {
        Some((e, p, r2, k)) => {
            let _ = writeln!(out, "# fit,{column},{},{},{},{k}", num(e), num(p), num(r2));
        }
        None => {
            let _ = writeln!(out, "# fit,{column},,,,");
        }
    }
}

/// Per-ν rows, then `# fit,column,exponent,prefactor,r_squared,points`
/// footer lines (empty fields when no fit was possible).
pub fn sweep_report(report: &SweepReport) -> String {
    let mut out =
        String::from("nu,rho_diff,u_diff,b_diff,ux_diff_integral,ux_sup_sq,weighted_sup\n");
    for r in &report.rows {
        row(
            &mut out,
            &[
                r.nu,
                r.rho_diff,
                r.u_diff,
                r.b_diff,
                r.ux_diff_integral,
                r.ux_sup_sq,
                r.weighted_sup,
            ],
        );
    }
    for (col, fit) in &report.fits {
        let f = fit.as_ref().map(|f| {
            (
                f.fit.exponent,
                f.fit.prefactor,
                f.fit.r_squared,
                f.points_used,
            )
        });
        fit_line(&mut out, col.name(), f);
    }
    if let Some(d) = report.discretization_error {
        let _ = writeln!(
            out,
            "# discretization_error,{},{},{}",
            num(d[0]),
            num(d[1]),
            num(d[2])
        );
    }
    out
}

pub fn layer_report(report: &LayerReport) -> String {
    let mut out = String::from(
        "nu,delta,interior_b,interior_rho,full_b,full_rho,u_sup,ux_sup_sq,weighted_sup,thickness,rho_min,rho_max\n",
    );
    for r in &report.rows {
        row(
            &mut out,
            &[
                r.nu,
                r.delta,
                r.interior_b,
                r.interior_rho,
                r.full_b,
                r.full_rho,
                r.u_sup,
                r.ux_sup_sq,
                r.weighted_sup,
                r.thickness,
                r.rho_min,
                r.rho_max,
            ],
        );
    }
    let n = report.rows.len();
    for (name, fit) in [
        ("ux_sup_sq", &report.ux_fit),
        ("weighted_sup", &report.weighted_fit),
        ("thickness", &report.thickness_fit),
    ] {
        fit_line(
            &mut out,
            name,
            fit.map(|f| (f.exponent, f.prefactor, f.r_squared, n)),
        );
    }
    out
}

pub fn profile(grid: &Grid, b: &[f64]) -> String {
    let mut out = String::from("x,b\n");
    for (i, &v) in b.iter().enumerate() {
        row(&mut out, &[grid.center(i), v]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_use_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-2.5e-300), "-2.5000000000000000e-300");
    }

    #[test]
    fn snapshot_round_trip_is_exact() {
        let grid = Grid::new(37).unwrap();
        let state = mhd1d_core::InitialData::Sine {
            rho_bar: 1.0,
            rho_amp: 0.3,
            rho_mode: 3,
            u_amp: 0.17,
            u_mode: 2,
            b_amp: 0.71,
            b_mode: 1,
        }
        .state(&grid);
        let text = snapshot(&grid, &state);
        assert!(!text.contains('\r'));
        let (g2, back) = parse_snapshot(&text, state.time).unwrap();
        assert_eq!(g2, grid);
        assert_eq!(back, state);
    }

    #[test]
    fn malformed_snapshot_is_rejected() {
        assert!(parse_snapshot("a,b\n", 0.0).is_err());
        assert!(parse_snapshot("x,rho,u,b\n0.5,1,0\n", 0.0).is_err());
    }
}
