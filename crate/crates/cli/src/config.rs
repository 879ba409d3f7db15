//! Run configuration and its flat `key=value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use pseudodot::oracle::{DEFAULT_POINTS, DEFAULT_R_MAX, MIN_POINTS};
use pseudodot::spectra::MAX_TABLE_INDEX;
use pseudodot::{ConfinementParams, RadialGrid, Scenario};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub depths: Vec<f64>,
    pub r0: f64,
    pub m0: f64,
    pub n_max: u32,
    pub l_max: u32,
    pub grid_points: usize,
    pub r_max: f64,
    pub format: Format,
    pub out: PathBuf,
    /// Relative perturbation injected into verification inputs; 0 disables.
    pub perturb: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::ExactVariableMass,
            depths: vec![1.0],
            r0: 1.0,
            m0: 1.0,
            n_max: 0,
            l_max: 0,
            grid_points: DEFAULT_POINTS,
            r_max: DEFAULT_R_MAX,
            format: Format::Csv,
            out: PathBuf::from("out"),
            perturb: 0.0,
        }
    }
}

/// Keys in serialisation order.
pub const KEYS: [&str; 11] = [
    "scenario",
    "De",
    "r0",
    "m0",
    "nmax",
    "lmax",
    "grid_points",
    "rmax",
    "format",
    "out",
    "perturb",
];

fn parse_f64(key: &str, value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("{key}: '{value}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{key}: value must be finite"))
    }
}

fn parse_u32(key: &str, value: &str) -> Result<u32, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: '{value}' is not a non-negative integer"))
}

impl RunConfig {
    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "scenario" => self.scenario = value.parse().map_err(|e| format!("scenario: {e}"))?,
            "De" => {
                self.depths = value
                    .split(',')
                    .map(|v| parse_f64(key, v.trim()))
                    .collect::<Result<_, _>>()?;
            }
            "r0" => self.r0 = parse_f64(key, value)?,
            "m0" => self.m0 = parse_f64(key, value)?,
            "nmax" => self.n_max = parse_u32(key, value)?,
            "lmax" => self.l_max = parse_u32(key, value)?,
            "grid_points" => {
                self.grid_points = value
                    .parse()
                    .map_err(|_| format!("grid_points: '{value}' is not a positive integer"))?;
            }
            "rmax" => self.r_max = parse_f64(key, value)?,
            "format" => self.format = value.parse()?,
            "out" => {
                if value.is_empty() {
                    return Err("out: path must not be empty".into());
                }
                self.out = PathBuf::from(value);
            }
            "perturb" => self.perturb = parse_f64(key, value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Text value of one field, as written by [`RunConfig::to_text`].
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "scenario" => self.scenario.tag().to_string(),
            "De" => self
                .depths
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
            "r0" => self.r0.to_string(),
            "m0" => self.m0.to_string(),
            "nmax" => self.n_max.to_string(),
            "lmax" => self.l_max.to_string(),
            "grid_points" => self.grid_points.to_string(),
            "rmax" => self.r_max.to_string(),
            "format" => self.format.to_string(),
            "out" => self.out.display().to_string(),
            "perturb" => self.perturb.to_string(),
            _ => return None,
        })
    }

    /// `(key, value)` pairs in [`KEYS`] order.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        KEYS.iter()
            .map(|&k| (k, self.get(k).expect("every key has a value")))
            .collect()
    }

    /// Canonical text: one `key=value` per line in [`KEYS`] order.
    pub fn to_text(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Parses config text over the defaults. Blank lines and `#` comments
    /// are skipped; a key may appear only once.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::Config {
                line: Some(line_no),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            cfg.set(key, value).map_err(err)?;
            seen.push(key);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |message: String| Err(CliError::Config { line: None, message });
        if self.depths.is_empty() {
            return fail("De: at least one well depth is required".into());
        }
        for &de in &self.depths {
            if let Err(e) = ConfinementParams::new(de, self.r0, self.m0) {
                return fail(e.to_string());
            }
        }
        if self.n_max > MAX_TABLE_INDEX || self.l_max > MAX_TABLE_INDEX {
            return fail(format!("nmax and lmax must be <= {MAX_TABLE_INDEX}"));
        }
        if self.grid_points < MIN_POINTS {
            return fail(format!("grid_points must be >= {MIN_POINTS}"));
        }
        if let Err(e) = self.grid() {
            return fail(e.to_string());
        }
        if !(self.perturb >= 0.0) {
            return fail("perturb must be >= 0".into());
        }
        Ok(())
    }

    pub fn params(&self, de: f64) -> Result<ConfinementParams, CliError> {
        ConfinementParams::new(de, self.r0, self.m0).map_err(CliError::from)
    }

    pub fn grid(&self) -> pseudodot::Result<RadialGrid> {
        RadialGrid::origin_anchored(self.r_max, self.grid_points)
    }
}
