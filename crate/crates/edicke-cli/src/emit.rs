//! Stable file output: CSV with embedded run configuration, JSON sidecars,
//! and flat binary arrays.
//!
//! Numeric CSV fields use 17 significant digits (`{:.16e}`) so that reruns
//! with identical configuration are byte-identical and round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::AppError;

/// Formats a float with 17 significant digits, locale-independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV buffer: `#` comment lines carrying the run configuration, a header
/// line, then data rows.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(command: &str, config: &[(String, String)]) -> Self {
        let mut buf = format!("# edicke {command}\n");
        for (k, v) in config {
            let _ = writeln!(buf, "# {k} = {v}");
        }
        Self { buf }
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.buf.push_str(&columns.join(","));
        self.buf.push('\n');
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn write(self, path: &Path) -> Result<(), AppError> {
        write_bytes(path, self.buf.as_bytes())
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    fs::write(path, bytes)
        .map_err(|e| AppError::Run(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::Run(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

/// Run configuration as a JSON object, for sidecar files.
pub fn config_json(config: &[(String, String)]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (k, v) in config {
        // numbers stay numbers where possible, everything else is a string
        let val = v
            .parse::<i64>()
            .map(serde_json::Value::from)
            .or_else(|_| v.parse::<f64>().map(serde_json::Value::from))
            .unwrap_or_else(|_| serde_json::Value::from(v.as_str()));
        map.insert(k.clone(), val);
    }
    serde_json::Value::Object(map)
}
