//! Run configuration: command-line flags override a `key = value` file,
//! which overrides the built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;

use semicubic::arith::{int, parse_rational, pow10_neg, ExactRational};

use crate::CliError;

pub const KEYS: [&str; 9] = ["tol", "t_min", "t_max", "samples", "dim", "s_min", "s_max", "s_steps", "format"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("unknown format {s:?} (text, csv or json)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tol: ExactRational,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub dim: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub s_steps: usize,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: pow10_neg(12),
            t_min: 1e-4,
            t_max: 1e4,
            samples: 512,
            dim: 40,
            s_min: 1e-3,
            s_max: 1e3,
            s_steps: 64,
            format: None,
        }
    }
}

/// Values given on the command line; `None` falls through to the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub values: BTreeMap<&'static str, String>,
}

impl Overrides {
    pub fn set(&mut self, key: &'static str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key, v);
        }
    }
}

pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn positive_f64(key: &str, v: &str) -> Result<f64, CliError> {
    match v.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(CliError::Usage(format!("{key} must be a positive number, got {v:?}"))),
    }
}

fn count(key: &str, v: &str) -> Result<usize, CliError> {
    match v.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(CliError::Usage(format!("{key} must be a positive integer, got {v:?}"))),
    }
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<RunConfig, CliError> {
        let mut merged: BTreeMap<String, String> = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                parse_file(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in &flags.values {
            merged.insert(k.to_string(), v.clone());
        }
        let mut c = RunConfig::default();
        for (k, v) in &merged {
            match k.as_str() {
                "tol" => {
                    c.tol = parse_rational(v)
                        .filter(|q| *q > int(0))
                        .ok_or_else(|| CliError::Usage(format!("tol must be a positive rational, got {v:?}")))?
                }
                "t_min" => c.t_min = positive_f64(k, v)?,
                "t_max" => c.t_max = positive_f64(k, v)?,
                "samples" => c.samples = count(k, v)?,
                "dim" => c.dim = count(k, v)?,
                "s_min" => c.s_min = positive_f64(k, v)?,
                "s_max" => c.s_max = positive_f64(k, v)?,
                "s_steps" => c.s_steps = count(k, v)?,
                "format" => c.format = Some(Format::parse(v)?),
                _ => unreachable!("keys are checked on parse"),
            }
        }
        if c.t_min >= c.t_max {
            return Err(CliError::Usage(format!("t_min {} must be below t_max {}", c.t_min, c.t_max)));
        }
        if c.s_min > c.s_max {
            return Err(CliError::Usage(format!("s_min {} must not exceed s_max {}", c.s_min, c.s_max)));
        }
        Ok(c)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beats_defaults() {
        let dir = std::env::temp_dir().join(format!("semicubic-config-{}", std::process::id()));
        std::fs::write(&dir, "# run\ndim = 80\ns-steps = 10\n").unwrap();
        let mut flags = Overrides::default();
        flags.set("dim", Some("120".into()));
        let c = RunConfig::resolve(Some(&dir), &flags).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(c.dim, 120);
        assert_eq!(c.s_steps, 10);
        assert_eq!(c.samples, 512);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_file("nonsense"), Err(CliError::Usage(_))));
        assert!(matches!(parse_file("colour = red"), Err(CliError::Usage(_))));
        let mut flags = Overrides::default();
        flags.set("t_min", Some("5".into()));
        flags.set("t_max", Some("1".into()));
        assert!(RunConfig::resolve(None, &flags).is_err());
    }
}
