//! Flat TOML configuration: sections `[fluid]`, `[grid]`, `[time]`,
//! `[initial]`, `[boundary]`, `[study]`.
//!
//! Profiles and boundary signals are short call-style strings, e.g.
//! `profile = "sine(1, 0.1, 2, 0, 1, 0.1, 1)"`, `b = "ramp(1, 1, 0.05)"`.

use std::ops::Range;
use std::path::Path;

use mhd1d_core::layer::{LayerScenario, DEFAULT_EPSILON};
use mhd1d_core::limit::{SweepSpec, DEFAULT_COMPARISON_TIMES};
use mhd1d_core::{uniform_times, BoundaryMagnetic, FluidParams, InitialData, ScenarioConfig};
use toml_edit::{ImDocument, Item, Table, Value};

use crate::error::CliError;

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_T: f64 = 0.1;
pub const DEFAULT_DELTA_EXPONENT: f64 = 0.4;

/// Text shown under `--help`.
pub const DEFAULTS_HELP: &str = "\
Config defaults:
  [fluid]    gamma = 1.4, A = 1, lambda = 1, nu = 0
  [grid]     n = 256
  [time]     T = 0.1, cfl = 0.4, snapshots = [T]
  [initial]  profile = \"constant(1)\"   (or \"smooth\", \"sine(rho_bar, rho_amp, rho_mode, u_amp, u_mode, b_amp, b_mode)\")
  [boundary] b = \"none\"               (or \"constant(c1, c2)\", \"sinusoid(a1, w1, a2, w2)\", \"ramp(c1, c2, t_rise)\")
  [study]    kind = \"solve\"           (or \"sweep\", \"layer\")
             ladder = [1e-2, 1e-3, 1e-4] or \"1e-2,1e-3,1e-4\" (required for sweep and layer)
             comparison_times = 32, delta_exponent = 0.4, epsilon = 0.01";

const KNOWN: &[(&str, &[&str])] = &[
    ("fluid", &["gamma", "A", "lambda", "nu"]),
    ("grid", &["n"]),
    ("time", &["T", "cfl", "snapshots"]),
    ("initial", &["profile"]),
    ("boundary", &["b"]),
    (
        "study",
        &[
            "kind",
            "ladder",
            "comparison_times",
            "delta_exponent",
            "epsilon",
        ],
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Study {
    Solve(ScenarioConfig),
    Sweep(Box<SweepSpec>),
    Layer(LayerScenario),
}

impl Study {
    pub fn kind(&self) -> &'static str {
        match self {
            Study::Solve(_) => "solve",
            Study::Sweep(_) => "sweep",
            Study::Layer(_) => "layer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub study: Study,
    /// Ignored keys when not strict.
    pub warnings: Vec<String>,
}

pub fn parse_config(path: &Path, strict: bool) -> Result<ParsedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text, strict)
}

/// A parsed value with the line of its key.
type Located<T> = Option<(T, Option<usize>)>;

struct Source<'a> {
    text: &'a str,
    doc: ImDocument<&'a str>,
}

impl Source<'_> {
    fn line(&self, span: Option<Range<usize>>) -> Option<usize> {
        span.map(|s| {
            self.text[..s.start.min(self.text.len())]
                .matches('\n')
                .count()
                + 1
        })
    }

    fn section(&self, name: &str) -> Option<&Table> {
        self.doc.as_table().get(name).and_then(Item::as_table)
    }

    fn value(&self, section: &str, key: &str) -> Option<(&Value, Option<usize>)> {
        let (k, item) = self.section(section)?.get_key_value(key)?;
        let line = self.line(k.span());
        item.as_value().map(|v| (v, line))
    }

    fn float(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.value(section, key) {
            None => Ok(None),
            Some((v, line)) => as_f64(v)
                .map(Some)
                .ok_or_else(|| CliError::config(line, format!("{section}.{key} must be a number"))),
        }
    }

    fn string(&self, section: &str, key: &str) -> Result<Located<String>, CliError> {
        match self.value(section, key) {
            None => Ok(None),
            Some((v, line)) => v
                .as_str()
                .map(|s| Some((s.to_string(), line)))
                .ok_or_else(|| {
                    CliError::config(line, format!("{section}.{key} must be a quoted string"))
                }),
        }
    }

    fn list(&self, section: &str, key: &str) -> Result<Located<Vec<f64>>, CliError> {
        let Some((v, line)) = self.value(section, key) else {
            return Ok(None);
        };
        let bad = || CliError::config(line, format!("{section}.{key} must be a list of numbers"));
        let out = if let Some(arr) = v.as_array() {
            arr.iter()
                .map(|x| as_f64(x).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()?
        } else if let Some(s) = v.as_str() {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            return Err(bad());
        };
        Ok(Some((out, line)))
    }

    fn integer(&self, section: &str, key: &str) -> Result<Located<usize>, CliError> {
        match self.value(section, key) {
            None => Ok(None),
            Some((v, line)) => match v.as_integer() {
                Some(i) if i >= 0 => Ok(Some((i as usize, line))),
                _ => Err(CliError::config(
                    line,
                    format!("{section}.{key} must be a non-negative integer"),
                )),
            },
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn check_keys(src: &Source<'_>, strict: bool, warnings: &mut Vec<String>) -> Result<(), CliError> {
    let mut report = |line: Option<usize>, msg: String| -> Result<(), CliError> {
        if strict {
            Err(CliError::config(line, msg))
        } else {
            warnings.push(match line {
                Some(l) => format!("line {l}: {msg} (ignored)"),
                None => format!("{msg} (ignored)"),
            });
            Ok(())
        }
    };
    for (name, item) in src.doc.as_table().iter() {
        let key_line = src.line(
            src.doc
                .as_table()
                .get_key_value(name)
                .and_then(|(k, _)| k.span()),
        );
        let Some(allowed) = KNOWN.iter().find(|(s, _)| *s == name).map(|(_, k)| *k) else {
            report(key_line, format!("unknown section or key '{name}'"))?;
            continue;
        };
        let Some(table) = item.as_table() else {
            report(key_line, format!("'{name}' must be a section"))?;
            continue;
        };
        for (key, _) in table.iter() {
            if !allowed.contains(&key) {
                let line = src.line(table.get_key_value(key).and_then(|(k, _)| k.span()));
                report(line, format!("unknown key '{name}.{key}'"))?;
            }
        }
    }
    Ok(())
}

/// Splits `name(a, b, ...)` into the name and its numeric arguments.
fn call(text: &str, line: Option<usize>) -> Result<(String, Vec<f64>), CliError> {
    let text = text.trim();
    let Some(open) = text.find('(') else {
        return Ok((text.to_string(), Vec::new()));
    };
    let inner = text[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| CliError::config(line, format!("missing ')' in '{text}'")))?;
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| {
                a.trim().parse::<f64>().map_err(|_| {
                    CliError::config(line, format!("bad number '{}' in '{text}'", a.trim()))
                })
            })
            .collect::<Result<_, _>>()?
    };
    Ok((text[..open].trim().to_string(), args))
}

fn arity(name: &str, args: &[f64], want: usize, line: Option<usize>) -> Result<(), CliError> {
    if args.len() == want {
        Ok(())
    } else {
        Err(CliError::config(
            line,
            format!("{name} takes {want} argument(s), got {}", args.len()),
        ))
    }
}

fn mode(v: f64, line: Option<usize>) -> Result<u32, CliError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(CliError::config(
            line,
            format!("mode numbers must be positive integers, got {v}"),
        ))
    }
}

pub fn parse_profile(text: &str, line: Option<usize>) -> Result<InitialData, CliError> {
    let (name, a) = call(text, line)?;
    match name.as_str() {
        "constant" => {
            arity("constant", &a, 1, line)?;
            Ok(InitialData::Constant { rho_bar: a[0] })
        }
        "smooth" => {
            arity("smooth", &a, 0, line)?;
            Ok(InitialData::smooth_default())
        }
        "sine" => {
            arity("sine", &a, 7, line)?;
            Ok(InitialData::Sine {
                rho_bar: a[0],
                rho_amp: a[1],
                rho_mode: mode(a[2], line)?,
                u_amp: a[3],
                u_mode: mode(a[4], line)?,
                b_amp: a[5],
                b_mode: mode(a[6], line)?,
            })
        }
        other => Err(CliError::config(line, format!("unknown profile '{other}'"))),
    }
}

pub fn parse_boundary(text: &str, line: Option<usize>) -> Result<BoundaryMagnetic, CliError> {
    let (name, a) = call(text, line)?;
    match name.as_str() {
        "none" => {
            arity("none", &a, 0, line)?;
            Ok(BoundaryMagnetic::None)
        }
        "constant" => {
            arity("constant", &a, 2, line)?;
            Ok(BoundaryMagnetic::Constant { c1: a[0], c2: a[1] })
        }
        "sinusoid" => {
            arity("sinusoid", &a, 4, line)?;
            Ok(BoundaryMagnetic::Sinusoid {
                a1: a[0],
                omega1: a[1],
                a2: a[2],
                omega2: a[3],
            })
        }
        "ramp" => {
            arity("ramp", &a, 3, line)?;
            Ok(BoundaryMagnetic::Ramp {
                c1: a[0],
                c2: a[1],
                t_rise: a[2],
            })
        }
        other => Err(CliError::config(
            line,
            format!("unknown boundary kind '{other}'"),
        )),
    }
}

fn at_line(line: Option<usize>) -> impl Fn(mhd1d_core::Error) -> CliError {
    move |e| match CliError::from(e) {
        CliError::Config {
            line: None,
            message,
        } => CliError::Config { line, message },
        other => other,
    }
}

pub fn parse_config_str(text: &str, strict: bool) -> Result<ParsedConfig, CliError> {
    let doc = ImDocument::parse(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        CliError::config(line, e.message().trim().to_string())
    })?;
    let src = Source { text, doc };
    let mut warnings = Vec::new();
    check_keys(&src, strict, &mut warnings)?;

    let defaults = FluidParams::default();
    let params = FluidParams::new(
        src.float("fluid", "A")?.unwrap_or(defaults.a()),
        src.float("fluid", "gamma")?.unwrap_or(defaults.gamma()),
        src.float("fluid", "lambda")?.unwrap_or(defaults.lambda()),
    )
    .map_err(at_line(
        src.section("fluid").and_then(|t| src.line(t.span())),
    ))?;
    let nu = src.float("fluid", "nu")?;
    let grid_n = src.integer("grid", "n")?.map_or(DEFAULT_GRID, |(n, _)| n);
    let t_final = src.float("time", "T")?.unwrap_or(DEFAULT_T);
    let cfl = src
        .float("time", "cfl")?
        .unwrap_or(mhd1d_core::config::DEFAULT_CFL);
    let snapshots = src.list("time", "snapshots")?;
    let (initial, initial_line) = match src.string("initial", "profile")? {
        Some((s, line)) => (parse_profile(&s, line)?, line),
        None => (InitialData::Constant { rho_bar: 1.0 }, None),
    };
    let (boundary, boundary_line) = match src.string("boundary", "b")? {
        Some((s, line)) => (parse_boundary(&s, line)?, line),
        None => (BoundaryMagnetic::None, None),
    };
    let kind = src.string("study", "kind")?;
    let ladder = src.list("study", "ladder")?;
    let comparison = src.integer("study", "comparison_times")?;
    let delta_exponent = src.float("study", "delta_exponent")?;
    let epsilon = src.float("study", "epsilon")?;
    let kind_line = kind.as_ref().and_then(|k| k.1);

    let only = |present: bool, key: &str, kinds: &str| -> Result<(), CliError> {
        if present {
            Err(CliError::config(
                kind_line,
                format!("study.{key} only applies to {kinds} studies"),
            ))
        } else {
            Ok(())
        }
    };

    let study = match kind.as_ref().map_or("solve", |k| k.0.as_str()) {
        "solve" => {
            only(ladder.is_some(), "ladder", "sweep and layer")?;
            only(comparison.is_some(), "comparison_times", "sweep")?;
            only(
                delta_exponent.is_some() || epsilon.is_some(),
                "delta_exponent/epsilon",
                "layer",
            )?;
            let times = snapshots.map_or_else(|| vec![t_final], |(v, _)| v);
            let cfg = ScenarioConfig::new(
                params,
                nu.unwrap_or(0.0),
                grid_n,
                t_final,
                initial,
                boundary,
                cfl,
                times,
            )
            .map_err(at_line(boundary_line))?;
            Study::Solve(cfg)
        }
        "sweep" => {
            only(
                delta_exponent.is_some() || epsilon.is_some(),
                "delta_exponent/epsilon",
                "layer",
            )?;
            if nu.is_some() {
                return Err(CliError::config(
                    kind_line,
                    "fluid.nu is not used by sweeps; the resistivities come from study.ladder",
                ));
            }
            let (ladder, ladder_line) = ladder
                .ok_or_else(|| CliError::config(kind_line, "sweep studies need study.ladder"))?;
            let base = ScenarioConfig::new(
                params,
                0.0,
                grid_n,
                t_final,
                initial,
                BoundaryMagnetic::None,
                cfl,
                vec![t_final],
            )
            .map_err(at_line(initial_line))?;
            let times = comparison.map(|(k, line)| {
                if k == 0 {
                    Err(CliError::config(
                        line,
                        "study.comparison_times must be >= 1",
                    ))
                } else {
                    Ok(uniform_times(t_final, k))
                }
            });
            let times = times
                .transpose()?
                .or_else(|| Some(uniform_times(t_final, DEFAULT_COMPARISON_TIMES)));
            let spec = SweepSpec::new(&base, boundary, &ladder, times)
                .map_err(at_line(ladder_line.or(boundary_line)))?;
            Study::Sweep(Box::new(spec))
        }
        "layer" => {
            only(comparison.is_some(), "comparison_times", "sweep")?;
            if nu.is_some() {
                return Err(CliError::config(kind_line, "fluid.nu is not used by layer studies; the resistivities come from study.ladder"));
            }
            let (ladder, ladder_line) = ladder
                .ok_or_else(|| CliError::config(kind_line, "layer studies need study.ladder"))?;
            let InitialData::Constant { rho_bar } = initial else {
                return Err(CliError::config(
                    initial_line,
                    "layer studies start from a constant profile",
                ));
            };
            let scn = LayerScenario::new(
                params,
                rho_bar,
                boundary,
                &ladder,
                delta_exponent.unwrap_or(DEFAULT_DELTA_EXPONENT),
                epsilon.unwrap_or(DEFAULT_EPSILON),
                t_final,
                grid_n,
                cfl,
            )
            .map_err(at_line(ladder_line.or(boundary_line)))?;
            Study::Layer(scn)
        }
        other => {
            return Err(CliError::config(
                kind_line,
                format!("unknown study kind '{other}'"),
            ))
        }
    };
    Ok(ParsedConfig { study, warnings })
}
