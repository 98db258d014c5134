//! `key = value` configuration files.
//!
//! ```text
//! # weights
//! alpha = 0.5
//! beta = 10
//! delta = 100
//! scaling = on
//! format = text
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected.

use std::str::FromStr;

use crate::consensus::Strictness;
use crate::score::{Scaling, Weights};

use super::CliError;

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "CONTRIP_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(format!(
                "unknown format {other:?}, expected csv, json or text"
            )),
        }
    }
}

pub(crate) fn parse_scaling(s: &str) -> Result<Scaling, String> {
    match s {
        "on" | "true" | "yes" => Ok(Scaling::On),
        "off" | "false" | "no" => Ok(Scaling::Off),
        other => Err(format!("unknown scaling {other:?}, expected on or off")),
    }
}

/// Values set in a config file; `None` means not mentioned.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub scaling: Option<Scaling>,
    pub format: Option<OutputFormat>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("config line {line_no}: {msg}"));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| bad(format!("{key} must be a number, got {value:?}")))
            };
            match key {
                "alpha" => config.alpha = Some(number()?),
                "beta" => config.beta = Some(number()?),
                "delta" => config.delta = Some(number()?),
                "scaling" => config.scaling = Some(parse_scaling(value).map_err(bad)?),
                "format" => config.format = Some(value.parse().map_err(bad)?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(config)
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliConfig {
    pub weights: Weights,
    pub scaling: Scaling,
    pub output_format: OutputFormat,
    pub strictness: Strictness,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            weights: Weights::default(),
            scaling: Scaling::On,
            output_format: OutputFormat::Text,
            strictness: Strictness::Strict,
        }
    }
}

/// Command-line overrides; each set field wins over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub scaling: Option<Scaling>,
    pub format: Option<OutputFormat>,
    pub strictness: Option<Strictness>,
}

impl CliConfig {
    /// Flags over file over built-in defaults.
    pub fn resolve(file: &ConfigFile, flags: &Overrides) -> Result<Self, CliError> {
        let defaults = Self::default();
        let pick =
            |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
        let weights = Weights::new(
            pick(flags.alpha, file.alpha, defaults.weights.alpha()),
            pick(flags.beta, file.beta, defaults.weights.beta()),
            pick(flags.delta, file.delta, defaults.weights.delta()),
        )
        .map_err(|e| CliError::Domain(e.to_string()))?;
        Ok(Self {
            weights,
            scaling: flags.scaling.or(file.scaling).unwrap_or(defaults.scaling),
            output_format: flags
                .format
                .or(file.format)
                .unwrap_or(defaults.output_format),
            strictness: flags.strictness.unwrap_or(defaults.strictness),
        })
    }
}
