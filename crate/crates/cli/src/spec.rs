//! Sweep specifications: flat `key = value` config files, command-line
//! overrides, defaults and validation.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use splittrap::BarrierStrength;

use crate::CliError;

/// RSPD work defaults to 81 points, momentum work to 61.
pub const DEFAULT_POINTS: usize = 81;
pub const DEFAULT_MOMENTUM_POINTS: usize = 61;
pub const DEFAULT_SPACING: f64 = 0.16;
pub const DEFAULT_K_POINTS: usize = 401;
pub const DEFAULT_K_SPAN: f64 = 8.0;
/// Contact strength standing in for the hard-core limit on the mesh.
pub const TG_PROXY_G: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spectrum,
    Tonks,
    Dvr,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "spectrum" => Ok(Self::Spectrum),
            "tonks" => Ok(Self::Tonks),
            "dvr" => Ok(Self::Dvr),
            other => Err(CliError::validation(format!(
                "unknown mode `{other}` (spectrum, tonks, dvr)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Spectrum => "spectrum",
            Self::Tonks => "tonks",
            Self::Dvr => "dvr",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    Energy,
    Rspd,
    Momentum,
    Entropy,
    Schmidt,
}

impl FromStr for Observable {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "energy" => Ok(Self::Energy),
            "rspd" => Ok(Self::Rspd),
            "momentum" => Ok(Self::Momentum),
            "entropy" => Ok(Self::Entropy),
            "schmidt" => Ok(Self::Schmidt),
            other => Err(CliError::validation(format!(
                "unknown output `{other}` (energy, rspd, momentum, entropy, schmidt)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::validation(format!(
                "unknown format `{other}` (csv, json)"
            ))),
        }
    }
}

/// A list entry that may be the literal `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Finite(f64),
    Infinite,
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }
}

/// Parses a real number; `inf` is the only non-numeric token.
pub fn parse_value(token: &str) -> Result<Value, CliError> {
    let token = token.trim();
    if token == "inf" {
        return Ok(Value::Infinite);
    }
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Value::Finite(v)),
        _ => Err(CliError::validation(format!(
            "`{token}` is not a finite number or `inf`"
        ))),
    }
}

pub fn parse_list(raw: &str) -> Result<Vec<Value>, CliError> {
    raw.split(',').map(parse_value).collect()
}

fn parse_finite(key: &str, raw: &str) -> Result<f64, CliError> {
    match parse_value(raw)? {
        Value::Finite(v) => Ok(v),
        Value::Infinite => Err(CliError::validation(format!(
            "`{key}` does not accept `inf`"
        ))),
    }
}

fn parse_count(key: &str, raw: &str) -> Result<usize, CliError> {
    raw.trim().parse().map_err(|_| {
        CliError::validation(format!(
            "`{key}` needs a non-negative integer, got `{}`",
            raw.trim()
        ))
    })
}

/// Sweep settings before defaults are applied. Later layers override
/// earlier ones field by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialSpec {
    pub mode: Option<Mode>,
    pub kappa: Option<Vec<Value>>,
    pub g1d: Option<Vec<Value>>,
    pub n_points: Option<usize>,
    pub dx: Option<f64>,
    pub k_points: Option<usize>,
    pub k_span: Option<f64>,
    pub outputs: Option<Vec<Observable>>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl PartialSpec {
    /// Reads a flat config: one `key = value` per line, `#` comments,
    /// comma-separated lists.
    pub fn from_config(text: &str) -> Result<Self, CliError> {
        let mut spec = Self::default();
        let mut seen = BTreeSet::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::validation(format!(
                    "config line {}: expected `key = value`",
                    number + 1
                ))
            })?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::validation(format!(
                    "config line {}: duplicate key `{key}`",
                    number + 1
                )));
            }
            spec.set(key, value.trim()).map_err(|e| {
                CliError::validation(format!("config line {}: {}", number + 1, e.message()))
            })?;
        }
        Ok(spec)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "mode" => self.mode = Some(value.parse()?),
            "kappa" => self.kappa = Some(parse_list(value)?),
            "g1d" => self.g1d = Some(parse_list(value)?),
            "n_points" => self.n_points = Some(parse_count(key, value)?),
            "dx" => self.dx = Some(parse_finite(key, value)?),
            "k_points" => self.k_points = Some(parse_count(key, value)?),
            "k_span" => self.k_span = Some(parse_finite(key, value)?),
            "outputs" => {
                self.outputs = Some(
                    value
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<_, _>>()?,
                )
            }
            "format" => self.format = Some(value.parse()?),
            "workers" => self.workers = Some(parse_count(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(CliError::validation(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// `other` wins wherever it has a value.
    pub fn overridden_by(self, other: PartialSpec) -> PartialSpec {
        PartialSpec {
            mode: other.mode.or(self.mode),
            kappa: other.kappa.or(self.kappa),
            g1d: other.g1d.or(self.g1d),
            n_points: other.n_points.or(self.n_points),
            dx: other.dx.or(self.dx),
            k_points: other.k_points.or(self.k_points),
            k_span: other.k_span.or(self.k_span),
            outputs: other.outputs.or(self.outputs),
            format: other.format.or(self.format),
            workers: other.workers.or(self.workers),
            out: other.out.or(self.out),
        }
    }

    /// Replaces `inf` contact strengths with the mesh proxy. Returns whether
    /// any entry was replaced.
    pub fn map_infinite_g_to_proxy(&mut self) -> bool {
        let mut mapped = false;
        for g in self.g1d.iter_mut().flatten() {
            if *g == Value::Infinite {
                *g = Value::Finite(TG_PROXY_G);
                mapped = true;
            }
        }
        mapped
    }

    /// Applies defaults and checks every invariant of a sweep.
    pub fn finish(self) -> Result<SweepSpec, CliError> {
        let mode = self
            .mode
            .ok_or_else(|| CliError::validation("no mode given (spectrum, tonks, dvr)"))?;
        let kappa = self
            .kappa
            .ok_or_else(|| CliError::validation("no kappa values given"))?;
        if kappa.is_empty() {
            return Err(CliError::validation("kappa list is empty"));
        }
        let kappa_values = kappa
            .iter()
            .map(|&k| match k {
                Value::Infinite if mode == Mode::Dvr => Err(CliError::validation(
                    "kappa = inf is not available on the mesh; use mode tonks",
                )),
                Value::Infinite => Ok(BarrierStrength::Infinite),
                Value::Finite(v) => BarrierStrength::finite(v).map_err(|_| {
                    CliError::validation(format!("kappa must be non-negative, got {v}"))
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;

        let g_values = match mode {
            Mode::Dvr => {
                let g = self
                    .g1d
                    .ok_or_else(|| CliError::validation("mode dvr needs g1d values"))?;
                if g.is_empty() {
                    return Err(CliError::validation("g1d list is empty"));
                }
                g.iter()
                    .map(|&g| match g {
                        Value::Infinite => Err(CliError::validation(format!(
                            "g1d = inf is not available on the mesh; use mode tonks or g1d = {TG_PROXY_G}"
                        ))),
                        Value::Finite(v) if v < 0.0 => {
                            Err(CliError::validation(format!("g1d must be non-negative, got {v}")))
                        }
                        Value::Finite(v) => Ok(v),
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            Mode::Tonks => {
                if let Some(g) = &self.g1d {
                    if g.iter().any(|&v| v != Value::Infinite) {
                        return Err(CliError::validation(
                            "mode tonks is the g1d = inf limit; drop g1d or set it to inf",
                        ));
                    }
                }
                vec![f64::INFINITY]
            }
            Mode::Spectrum => {
                if self.g1d.is_some() {
                    return Err(CliError::validation(
                        "mode spectrum is a single particle; g1d does not apply",
                    ));
                }
                vec![0.0]
            }
        };

        let outputs: BTreeSet<Observable> = match self.outputs {
            Some(list) => list.into_iter().collect(),
            None if mode == Mode::Spectrum => [Observable::Energy].into(),
            None => [Observable::Energy, Observable::Entropy, Observable::Schmidt].into(),
        };
        if outputs.is_empty() {
            return Err(CliError::validation("outputs list is empty"));
        }
        if mode == Mode::Spectrum && outputs.iter().any(|&o| o != Observable::Energy) {
            return Err(CliError::validation("mode spectrum only produces energy"));
        }
        let wants_files =
            outputs.contains(&Observable::Rspd) || outputs.contains(&Observable::Momentum);
        if wants_files && self.out.is_none() {
            return Err(CliError::validation(
                "rspd and momentum outputs are written next to --out; give a path",
            ));
        }

        let default_points = if outputs.contains(&Observable::Momentum) {
            DEFAULT_MOMENTUM_POINTS
        } else {
            DEFAULT_POINTS
        };
        let n_points = self.n_points.unwrap_or(default_points);
        let dx = self.dx.unwrap_or(DEFAULT_SPACING);
        splittrap::build_grid(n_points, dx).map_err(|e| CliError::validation(e.to_string()))?;

        let k_points = self.k_points.unwrap_or(DEFAULT_K_POINTS);
        let k_span = self.k_span.unwrap_or(DEFAULT_K_SPAN);
        if k_points < 2 {
            return Err(CliError::validation(format!(
                "k_points must be at least 2, got {k_points}"
            )));
        }
        if k_span <= 0.0 {
            return Err(CliError::validation(format!(
                "k_span must be positive, got {k_span}"
            )));
        }

        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(CliError::validation("workers must be at least 1"));
        }

        Ok(SweepSpec {
            mode,
            kappa_values,
            g_values,
            grid: (n_points, dx),
            k_grid: (k_points, k_span),
            outputs,
            format: self.format.unwrap_or_default(),
            workers,
            out: self.out,
        })
    }
}

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: Mode,
    pub kappa_values: Vec<BarrierStrength>,
    /// `[inf]` in tonks mode and `[0]` in spectrum mode.
    pub g_values: Vec<f64>,
    pub grid: (usize, f64),
    pub k_grid: (usize, f64),
    pub outputs: BTreeSet<Observable>,
    pub format: Format,
    pub workers: usize,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    /// Parameter points in output order: kappa outer, g inner.
    pub fn points(&self) -> Vec<(BarrierStrength, f64)> {
        self.kappa_values
            .iter()
            .flat_map(|&k| self.g_values.iter().map(move |&g| (k, g)))
            .collect()
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.outputs.contains(&o)
    }
}
