use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::{CostParams, DEFAULT_K_MAX};
use crate::metrics::EvalSettings;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::invalid(format!("unknown format {other:?}, expected json or csv"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Evaluation configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalConfig {
    pub gammas: Vec<f64>,
    pub lambda_size: f64,
    pub k_max: usize,
    /// Raster resolution for patch IoU, m/px.
    pub resolution: Option<f64>,
    pub individual_iou: bool,
    pub format: OutputFormat,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            gammas: vec![0.5, 1.0, 2.0],
            lambda_size: CostParams::DEFAULT_LAMBDA_SIZE,
            k_max: DEFAULT_K_MAX,
            resolution: None,
            individual_iou: true,
            format: OutputFormat::Json,
        }
    }
}

/// Comma-separated list of reals, as in `0.5,1,2`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("not a number: {:?}", v.trim())))
        })
        .collect()
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("bad value {value:?} for {key}")))
}

impl EvalConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "gamma" | "gammas" => self.gammas = parse_f64_list(value)?,
            "lambda_size" => self.lambda_size = parse(key, value)?,
            "kmax" | "k_max" => self.k_max = parse(key, value)?,
            "resolution" => self.resolution = Some(parse(key, value)?),
            "individual_iou" => self.individual_iou = parse(key, value)?,
            "format" => self.format = value.parse()?,
            other => return Err(Error::invalid(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, source: &Path) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: source.into(),
                line: i as u64 + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            self.set(k.trim().replace('-', "_").as_str(), v.trim())
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text, path)
    }

    pub fn settings(&self) -> EvalSettings {
        EvalSettings {
            gammas: self.gammas.clone(),
            lambda_size: self.lambda_size,
            k_max: self.k_max,
            patch_resolution: self.resolution,
            individual_iou: self.individual_iou,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.settings().validate()
    }
}
