//! Optional `key = value` defaults file.
//!
//! ```text
//! # comments and blank lines are ignored
//! rho = 1.05
//! threshold_db = 0.5
//! ```

use std::path::Path;

use timeavg_core::contrast::DEFAULT_THRESHOLD_DB;
use timeavg_core::DEFAULT_RHO;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub rho: f64,
    pub threshold_db: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            rho: DEFAULT_RHO,
            threshold_db: DEFAULT_THRESHOLD_DB,
        }
    }
}

impl Defaults {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut out = Defaults::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {lineno}: expected key = value")))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                CliError::Config(format!("line {lineno}: {:?} is not a number", value.trim()))
            })?;
            match key.trim() {
                "rho" => out.rho = value,
                "threshold_db" => out.threshold_db = value,
                other => {
                    return Err(CliError::Config(format!("line {lineno}: unknown key {other:?}")))
                }
            }
        }
        if !(out.rho >= 1.0) {
            return Err(CliError::Config(format!("rho must be >= 1, got {}", out.rho)));
        }
        if !(out.threshold_db > 0.0) {
            return Err(CliError::Config(format!(
                "threshold_db must be positive, got {}",
                out.threshold_db
            )));
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }
}
