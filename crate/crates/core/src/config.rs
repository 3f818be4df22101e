//! Flat `key = value` run configuration.

use std::collections::BTreeSet;
use std::path::PathBuf;

use thiserror::Error;

use crate::evaluation::ReportFormat;
use crate::ner_io::EntityCategory;
use crate::phonology::DEFAULT_DIGRAPHS;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub digraphs: Vec<String>,
    pub skip: BTreeSet<EntityCategory>,
    pub fallback_table: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            digraphs: DEFAULT_DIGRAPHS.iter().map(|d| d.to_string()).collect(),
            skip: BTreeSet::from([EntityCategory::Misc]),
            fallback_table: None,
            format: ReportFormat::Text,
        }
    }
}

/// Parses a comma-separated category list. An empty string is the empty set.
pub fn parse_category_list(s: &str) -> Result<BTreeSet<EntityCategory>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| name.parse::<EntityCategory>().map_err(|n| format!("unknown category {n:?}")))
        .collect()
}

impl Config {
    /// Recognized keys: `digraphs`, `skip`, `fallback_table`, `format`.
    /// Anything else is an error.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ConfigError { line, message };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(err(format!("expected key=value, got {trimmed:?}")));
            };
            let value = value.trim();
            match key.trim() {
                "digraphs" => {
                    config.digraphs = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                }
                "skip" => config.skip = parse_category_list(value).map_err(err)?,
                "fallback_table" => {
                    config.fallback_table = (!value.is_empty()).then(|| PathBuf::from(value));
                }
                "format" => config.format = value.parse().map_err(err)?,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(config)
    }
}
