use std::path::Path;

use crate::analytics::DEFAULT_HEAVY_THRESHOLD;
use crate::error::{Error, Result};
use crate::graph::{DEFAULT_MIN_READERS, DEFAULT_WINDOW_DAYS};
use crate::retrieval::{DEFAULT_OPERATOR_LIMIT, DEFAULT_SEARCH_LIMIT};

/// Environment variable that overrides the data directory.
pub const DATA_DIR_ENV: &str = "BIBOPS_DATA_DIR";

/// Runtime settings, read from a flat `key = value` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub window_days: u32,
    pub min_readers: usize,
    pub search_limit: usize,
    pub operator_limit: usize,
    pub heavy_threshold: u64,
    pub port: u16,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window_days: DEFAULT_WINDOW_DAYS,
            min_readers: DEFAULT_MIN_READERS,
            search_limit: DEFAULT_SEARCH_LIMIT,
            operator_limit: DEFAULT_OPERATOR_LIMIT,
            heavy_threshold: DEFAULT_HEAVY_THRESHOLD,
            port: 8080,
        }
    }
}

impl Config {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let entry = raw.split('#').next().unwrap_or_default().trim();
            if entry.is_empty() {
                continue;
            }
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| Error::parse(source, line, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |_| Error::parse(source, line, format!("bad value {value:?} for {key}"));
            match key {
                "window_days" => cfg.window_days = value.parse().map_err(bad)?,
                "min_readers" => cfg.min_readers = value.parse().map_err(bad)?,
                "search_limit" => cfg.search_limit = value.parse().map_err(bad)?,
                "operator_limit" => cfg.operator_limit = value.parse().map_err(bad)?,
                "heavy_threshold" => cfg.heavy_threshold = value.parse().map_err(bad)?,
                "port" => cfg.port = value.parse().map_err(bad)?,
                other => return Err(Error::parse(source, line, format!("unknown key {other:?}"))),
            }
        }
        if cfg.window_days == 0
            || cfg.min_readers == 0
            || cfg.search_limit == 0
            || cfg.operator_limit == 0
        {
            return Err(Error::Validation(format!(
                "{source}: window_days, min_readers and limits must be positive"
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(
            &crate::corpus::read_to_string(path)?,
            &path.display().to_string(),
        )
    }
}
