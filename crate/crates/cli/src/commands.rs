//! Subcommand drivers. Every command writes into one output directory and
//! finishes with `manifest.txt`; on failure the files it wrote are removed.

use std::path::{Path, PathBuf};

use mhd1d_core::exec::Execution;
use mhd1d_core::layer::run_layer_study;
use mhd1d_core::limit::run_sweep;
use mhd1d_core::solver::run;
use mhd1d_core::verify::{
    mms_order_study, self_convergence, trivial_solution_check, ConvergenceStatus, DecayingTrigCase,
    Order, System, TrivialVerdict,
};
use mhd1d_core::{BoundaryMagnetic, FluidParams, InitialData, ScenarioConfig};

use crate::config::{parse_config_str, ParsedConfig, Study};
use crate::csv;
use crate::error::CliError;
use crate::output::{sha256_hex, unix_seconds, OutputDir, RunManifest};

pub const THREADS_ENV: &str = "MHD1D_THREADS";

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub strict: bool,
    pub quiet: bool,
    pub exec: Execution,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            strict: true,
            quiet: false,
            exec: Execution::default(),
        }
    }
}

/// Worker setting from the value of `MHD1D_THREADS` (unset: all cores).
pub fn execution_from_threads(value: Option<&str>) -> Result<Execution, CliError> {
    match value.map(str::trim) {
        None | Some("") => Ok(Execution::default()),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Execution::with_threads(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

pub fn execution_from_env() -> Result<Execution, CliError> {
    execution_from_threads(std::env::var(THREADS_ENV).ok().as_deref())
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub manifest: RunManifest,
    pub warnings: Vec<String>,
    /// Short human-readable result lines.
    pub summary: Vec<String>,
}

struct Loaded {
    path: PathBuf,
    hash: String,
    parsed: ParsedConfig,
}

fn load(path: &Path, strict: bool) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::config(None, format!("{} is not UTF-8 text", path.display())))?;
    Ok(Loaded {
        path: path.to_path_buf(),
        hash: sha256_hex(&bytes),
        parsed: parse_config_str(&text, strict)?,
    })
}

fn wrong_kind(study: &Study, command: &str) -> CliError {
    CliError::Usage(format!(
        "config describes a {} study; run `mhd1d {}` (or set study.kind = \"{command}\")",
        study.kind(),
        study.kind()
    ))
}

fn with_output(
    out: &Path,
    command: &str,
    config: Option<(&Path, &str)>,
    description: String,
    body: impl FnOnce(&mut OutputDir) -> Result<Vec<String>, CliError>,
) -> Result<(RunManifest, Vec<String>), CliError> {
    let started = unix_seconds();
    let mut dir = OutputDir::create(out)?;
    let summary = match body(&mut dir) {
        Ok(s) => s,
        Err(e) => {
            dir.discard();
            return Err(e);
        }
    };
    let mut files = dir.files().to_vec();
    files.push("manifest.txt".into());
    let manifest = RunManifest {
        command: command.into(),
        config_path: config.map(|c| c.0.to_path_buf()),
        config_hash: config.map_or_else(|| sha256_hex(b""), |c| c.1.to_string()),
        description,
        output_dir: dir.root().to_path_buf(),
        files,
        started,
        finished: unix_seconds(),
    };
    if let Err(e) = dir.write("manifest.txt", &manifest.render()) {
        dir.discard();
        return Err(e);
    }
    Ok((manifest, summary))
}

fn describe(cfg: &ScenarioConfig) -> String {
    format!(
        "n={} T={} nu={} cfl={} initial={:?} boundary={:?}",
        cfg.grid_n, cfg.t_final, cfg.nu, cfg.cfl, cfg.initial, cfg.boundary_b
    )
}

pub fn cmd_solve(config: &Path, out: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let loaded = load(config, opts.strict)?;
    let Study::Solve(cfg) = &loaded.parsed.study else {
        return Err(wrong_kind(&loaded.parsed.study, "solve"));
    };
    let (manifest, summary) = with_output(
        out,
        "solve",
        Some((&loaded.path, &loaded.hash)),
        describe(cfg),
        |dir| {
            let result = run(cfg)?;
            let grid = cfg.grid();
            for (k, snap) in result.snapshots.iter().enumerate() {
                dir.write(
                    &format!("snapshot_{k:04}.csv"),
                    &csv::snapshot(&grid, &snap.state),
                )?;
            }
            dir.write("invariants.csv", &csv::invariants(&result.invariant_series))?;
            Ok(vec![format!(
                "{} steps, {} snapshot(s), t = {}",
                result.step_count,
                result.snapshots.len(),
                result.final_state.time
            )])
        },
    )?;
    Ok(Outcome {
        manifest,
        warnings: loaded.parsed.warnings,
        summary,
    })
}

pub fn cmd_sweep(config: &Path, out: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let loaded = load(config, opts.strict)?;
    let Study::Sweep(spec) = &loaded.parsed.study else {
        return Err(wrong_kind(&loaded.parsed.study, "sweep"));
    };
    let mut warnings = loaded.parsed.warnings.clone();
    let description = format!(
        "sweep ladder={:?} {}",
        spec.nu_ladder(),
        describe(&spec.resistive(spec.nu_ladder()[0])?)
    );
    let (manifest, summary) = with_output(
        out,
        "sweep",
        Some((&loaded.path, &loaded.hash)),
        description,
        |dir| {
            let report = run_sweep(spec, opts.exec)?;
            dir.write("sweep_report.csv", &csv::sweep_report(&report))?;
            warnings.extend(report.warnings.iter().cloned());
            Ok(report
                .fits
                .iter()
                .map(|(col, fit)| match fit {
                    Some(f) => format!(
                        "{}: exponent {:.4} (r^2 {:.4})",
                        col.name(),
                        f.fit.exponent,
                        f.fit.r_squared
                    ),
                    None => format!("{}: no fit", col.name()),
                })
                .collect())
        },
    )?;
    Ok(Outcome {
        manifest,
        warnings,
        summary,
    })
}

pub fn cmd_layer(config: &Path, out: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let loaded = load(config, opts.strict)?;
    let Study::Layer(scn) = &loaded.parsed.study else {
        return Err(wrong_kind(&loaded.parsed.study, "layer"));
    };
    let description = format!(
        "layer ladder={:?} delta_exponent={} epsilon={} n={} T={} boundary={:?}",
        scn.nu_ladder(),
        scn.delta_exponent(),
        scn.epsilon(),
        scn.grid_n,
        scn.t_final,
        scn.boundary_b
    );
    let (manifest, summary) = with_output(
        out,
        "layer",
        Some((&loaded.path, &loaded.hash)),
        description,
        |dir| {
            let report = run_layer_study(scn, opts.exec)?;
            dir.write("layer_report.csv", &csv::layer_report(&report))?;
            let grid = mhd1d_core::Grid::new(report.grid_n)?;
            for row in &report.rows {
                dir.write(
                    &format!("b_profile_nu_{:e}.csv", row.nu),
                    &csv::profile(&grid, &row.b_profile),
                )?;
            }
            let fmt = |name: &str, f: Option<mhd1d_core::limit::RateFit>| match f {
                Some(f) => format!("{name}: exponent {:.4}", f.exponent),
                None => format!("{name}: no fit"),
            };
            Ok(vec![
                fmt("ux_sup_sq", report.ux_fit),
                fmt("weighted_sup", report.weighted_fit),
                fmt("thickness", report.thickness_fit),
            ])
        },
    )?;
    Ok(Outcome {
        manifest,
        warnings: loaded.parsed.warnings,
        summary,
    })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub passed: bool,
}

fn orders_text(orders: &[[Order; 3]]) -> String {
    orders
        .iter()
        .flatten()
        .map(|o| match o {
            Order::Exact => "exact".to_string(),
            Order::Measured(p) => format!("{p:.3}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The shipped suite: trivial-solution preservation and its guard,
/// manufactured-solution orders for both systems, and self-convergence of a
/// smooth run. With a solve config, that config's self-convergence is added.
pub fn verify_suite(
    extra: Option<&ScenarioConfig>,
    exec: Execution,
) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let p = FluidParams::default();
    let zero = BoundaryMagnetic::Constant { c1: 0.0, c2: 0.0 };

    for (label, rho_bar, nu) in [("trivial_nu0", 1.0, 0.0), ("trivial_resistive", 2.5, 1e-3)] {
        let r = trivial_solution_check(p, rho_bar, nu, zero, 256, 1.0)?;
        checks.push(Check {
            name: label.into(),
            value: csv::num(r.max_deviation),
            passed: r.verdict == TrivialVerdict::Pass,
        });
    }
    let ramp = BoundaryMagnetic::Ramp {
        c1: 1.0,
        c2: 1.0,
        t_rise: 0.05,
    };
    let r = trivial_solution_check(p, 1.0, 1e-3, ramp, 256, 0.1)?;
    checks.push(Check {
        name: "trivial_guard_detects_forcing".into(),
        value: csv::num(r.max_deviation),
        passed: r.verdict == TrivialVerdict::NontrivialForcing,
    });

    let case = DecayingTrigCase::default();
    for (label, system) in [
        ("mms_resistive", System::Resistive { nu: 0.01 }),
        ("mms_nonresistive", System::NonResistive),
    ] {
        let r = mms_order_study(&case, system, &[128, 256, 512, 1024], 0.1, exec)?;
        checks.push(Check {
            name: label.into(),
            value: orders_text(&r.orders),
            passed: r.passes(0.8, 2.2),
        });
    }

    let smooth = ScenarioConfig::simple(
        0.0,
        64,
        0.1,
        InitialData::smooth_default(),
        BoundaryMagnetic::None,
    )?;
    let mut configs = vec![("self_convergence_smooth", smooth)];
    if let Some(cfg) = extra {
        configs.push(("self_convergence_config", cfg.clone()));
    }
    for (label, cfg) in configs {
        let r = self_convergence(&cfg, 3, exec)?;
        let ratios = r
            .ratios
            .iter()
            .map(|x| format!("{x:.3}"))
            .collect::<Vec<_>>()
            .join(" ");
        checks.push(Check {
            name: label.into(),
            value: format!("{:?} {ratios}", r.status),
            passed: r.status != ConvergenceStatus::UnderResolved,
        });
    }
    Ok(checks)
}

pub fn cmd_verify(config: Option<&Path>, out: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let loaded = config.map(|c| load(c, opts.strict)).transpose()?;
    let extra = match loaded.as_ref().map(|l| &l.parsed.study) {
        None => None,
        Some(Study::Solve(cfg)) => Some(cfg),
        Some(other) => return Err(wrong_kind(other, "solve")),
    };
    let mut failed = Vec::new();
    let (manifest, summary) = with_output(
        out,
        "verify",
        loaded.as_ref().map(|l| (l.path.as_path(), l.hash.as_str())),
        "verification suite".into(),
        |dir| {
            let checks = verify_suite(extra, opts.exec)?;
            let mut report = String::from("check,value,passed\n");
            let mut lines = Vec::new();
            for c in &checks {
                report.push_str(&format!("{},{},{}\n", c.name, c.value, c.passed));
                lines.push(format!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value
                ));
                if !c.passed {
                    failed.push(c.name.clone());
                }
            }
            dir.write("verify_report.csv", &report)?;
            Ok(lines)
        },
    )?;
    if !failed.is_empty() {
        return Err(CliError::Verify(format!(
            "{} (report in {})",
            failed.join(", "),
            manifest.output_dir.display()
        )));
    }
    Ok(Outcome {
        manifest,
        warnings: loaded.map(|l| l.parsed.warnings).unwrap_or_default(),
        summary,
    })
}
