//! Line-oriented `key=value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::chain::ChainMode;
use crate::error::{Error, Result};
use crate::noise::NoiseParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig3,
    ThresholdScan,
    ChainScan,
    DecayScan,
    OracleCheck,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig3,
        Preset::ThresholdScan,
        Preset::ChainScan,
        Preset::DecayScan,
        Preset::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::ThresholdScan => "threshold-scan",
            Preset::ChainScan => "chain-scan",
            Preset::DecayScan => "decay-scan",
            Preset::OracleCheck => "oracle-check",
        }
    }

    fn default_grid(self) -> Grid {
        match self {
            Preset::OracleCheck => Grid {
                min: 0.05,
                max: 0.95,
                step: 0.05,
            },
            _ => Grid {
                min: 0.5,
                max: 1.0,
                step: 0.01,
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "preset",
                name: s.to_string(),
            })
    }
}

/// Inclusive uniform grid `min, min + step, …, max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points generated by index so round-off does not accumulate.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (self.min + self.step * i as f64).min(self.max))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub f_grid: Grid,
    pub p1: f64,
    pub eta: f64,
    pub p1_values: Vec<f64>,
    pub eta_values: Vec<f64>,
    pub segments: Vec<usize>,
    pub rounds: Vec<usize>,
    pub f0: f64,
    pub n_max: usize,
    pub mode: ChainMode,
    pub protocol: String,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn for_preset(preset: Preset) -> Self {
        let noise = NoiseParams::default();
        Self {
            preset,
            f_grid: preset.default_grid(),
            p1: noise.p1(),
            eta: noise.eta(),
            p1_values: vec![0.9, 0.95, 0.97, 0.99, 1.0],
            eta_values: vec![0.95, 0.98, 1.0],
            segments: vec![1, 2, 4, 8, 16],
            rounds: vec![0, 1, 2, 3],
            f0: 0.96,
            n_max: 16,
            mode: ChainMode::ClosedForm,
            protocol: "noisy-dep".to_string(),
            out: None,
        }
    }

    pub fn noise(&self) -> Result<NoiseParams> {
        NoiseParams::new(self.p1, self.eta)
    }
}

const KEYS: [&str; 15] = [
    "preset",
    "f_min",
    "f_max",
    "f_step",
    "p1",
    "eta",
    "p1_values",
    "eta_values",
    "segments",
    "rounds",
    "f0",
    "n_max",
    "mode",
    "protocol",
    "out",
];

fn config_error(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_error(line, format!("malformed value `{value}` for `{key}`")))
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    let items = value
        .split(',')
        .map(|item| parse_value(line, key, item.trim()))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(config_error(line, format!("`{key}` is empty")));
    }
    Ok(items)
}

fn probability(line: usize, key: &str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(config_error(
            line,
            format!("`{key}` = {value} is outside [0, 1]"),
        ))
    }
}

/// Parses `key=value` lines; `#` starts a comment. Unset keys take the
/// preset's defaults (p1 = 0.99, eta = 1).
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(line, format!("expected key=value, got `{content}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config_error(line, format!("unknown key `{key}`")));
        }
        entries.insert(key, (line, value.trim()));
    }

    let (preset_line, preset) = entries
        .get("preset")
        .copied()
        .ok_or_else(|| config_error(0, "missing `preset`"))?;
    let preset: Preset = preset
        .parse()
        .map_err(|e: Error| config_error(preset_line, e.to_string()))?;
    let mut cfg = ExperimentConfig::for_preset(preset);
    let mut grid_line = 0;

    for (&key, &(line, value)) in &entries {
        match key {
            "preset" => {}
            "f_min" => {
                cfg.f_grid.min = probability(line, key, parse_value(line, key, value)?)?;
                grid_line = grid_line.max(line);
            }
            "f_max" => {
                cfg.f_grid.max = probability(line, key, parse_value(line, key, value)?)?;
                grid_line = grid_line.max(line);
            }
            "f_step" => {
                cfg.f_grid.step = parse_value(line, key, value)?;
                grid_line = grid_line.max(line);
            }
            "p1" => cfg.p1 = probability(line, key, parse_value(line, key, value)?)?,
            "eta" => cfg.eta = probability(line, key, parse_value(line, key, value)?)?,
            "p1_values" => {
                cfg.p1_values = parse_list(line, key, value)?
                    .into_iter()
                    .map(|v| probability(line, key, v))
                    .collect::<Result<_>>()?
            }
            "eta_values" => {
                cfg.eta_values = parse_list(line, key, value)?
                    .into_iter()
                    .map(|v| probability(line, key, v))
                    .collect::<Result<_>>()?
            }
            "segments" => cfg.segments = parse_list(line, key, value)?,
            "rounds" => cfg.rounds = parse_list(line, key, value)?,
            "f0" => cfg.f0 = probability(line, key, parse_value(line, key, value)?)?,
            "n_max" => {
                cfg.n_max = parse_value(line, key, value)?;
                if cfg.n_max < 2 {
                    return Err(config_error(line, "`n_max` must be at least 2"));
                }
            }
            "mode" => {
                cfg.mode = value
                    .parse()
                    .map_err(|e: Error| config_error(line, e.to_string()))?
            }
            "protocol" => {
                crate::purification::ProtocolRegistry::default()
                    .create(value, NoiseParams::ideal())
                    .map_err(|e| config_error(line, e.to_string()))?;
                cfg.protocol = value.to_string();
            }
            "out" => cfg.out = Some(PathBuf::from(value)),
            _ => unreachable!("key list checked above"),
        }
    }

    let g = cfg.f_grid;
    if !(g.step > 0.0 && g.step.is_finite()) || g.min > g.max {
        return Err(config_error(
            grid_line,
            format!("empty F grid [{}, {}] step {}", g.min, g.max, g.step),
        ));
    }
    Ok(cfg)
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`parse_config`]: every key written explicitly.
pub fn render(cfg: &ExperimentConfig) -> String {
    let mut lines = vec![
        format!("preset={}", cfg.preset),
        format!("f_min={}", cfg.f_grid.min),
        format!("f_max={}", cfg.f_grid.max),
        format!("f_step={}", cfg.f_grid.step),
        format!("p1={}", cfg.p1),
        format!("eta={}", cfg.eta),
        format!("p1_values={}", join(&cfg.p1_values)),
        format!("eta_values={}", join(&cfg.eta_values)),
        format!("segments={}", join(&cfg.segments)),
        format!("rounds={}", join(&cfg.rounds)),
        format!("f0={}", cfg.f0),
        format!("n_max={}", cfg.n_max),
        format!("mode={}", cfg.mode.name()),
        format!("protocol={}", cfg.protocol),
    ];
    if let Some(out) = &cfg.out {
        lines.push(format!("out={}", out.display()));
    }
    lines.join("\n") + "\n"
}
