//! Flat `key = value` configuration files with one section per command.
//!
//! ```text
//! # shared options live before any section
//! gamma = 0.8
//! eta = 0.2
//! j = 20
//!
//! [spectrum]
//! n-max = 300
//! parity = +1
//! ```
//!
//! Keys use the same spelling as the long command-line flags. Command-line
//! flags override file values; section values override top-level ones.

use std::collections::HashMap;
use std::str::FromStr;

use crate::AppError;

#[derive(Debug, Default)]
pub struct FileConfig {
    sections: HashMap<String, HashMap<String, String>>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let mut sections: HashMap<String, HashMap<String, String>> = HashMap::new();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "config line {} is neither `key = value` nor `[section]`: {raw:?}",
                    lineno + 1
                )));
            };
            sections
                .entry(current.clone())
                .or_default()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { sections })
    }

    /// Looks `key` up in `section` first, then among the top-level entries.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .or_else(|| self.sections.get("").and_then(|s| s.get(key)))
            .map(String::as_str)
    }
}

/// Merges a command-line value with the config file: the flag wins, then the
/// file, then `None`.
pub fn resolve<T>(
    cli: Option<T>,
    file: &FileConfig,
    section: &str,
    key: &str,
) -> Result<Option<T>, AppError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    if cli.is_some() {
        return Ok(cli);
    }
    match file.get(section, key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
            AppError::Usage(format!("config key `{key}` has unparseable value {raw:?}: {e}"))
        }),
    }
}
