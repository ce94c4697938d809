//! Deterministic, atomic output writing.
//!
//! Data files are comma-separated with `#`-prefixed header lines carrying
//! units and generation metadata (tool version, configuration hash, seed).
//! Files are written to a sibling temporary path and renamed into place,
//! so a crashed run never leaves a partial file. Numbers use Rust's
//! shortest round-trip formatting, which is byte-deterministic for a given
//! value.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Result;

/// Generation metadata stamped into every output header.
#[derive(Debug, Clone)]
pub struct RunMeta {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

impl RunMeta {
    /// Hash the canonical serialization of the resolved configuration.
    pub fn new(command: &str, canonical_config: &str, seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(canonical_config.as_bytes());
        let digest = hasher.finalize();
        let mut hash = String::with_capacity(12);
        for byte in digest.iter().take(6) {
            let _ = write!(hash, "{byte:02x}");
        }
        RunMeta { command: command.to_string(), config_hash: hash, seed }
    }

    fn header_lines(&self, extra: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# spinforge {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# config-hash: {}", self.config_hash);
        let _ = writeln!(s, "# seed: {}", self.seed);
        for line in extra {
            let _ = writeln!(s, "# {line}");
        }
        s
    }
}

/// An in-memory CSV document rendered and written atomically.
pub struct CsvDocument {
    meta: RunMeta,
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvDocument {
    pub fn new(meta: RunMeta, columns: &[&str]) -> Self {
        CsvDocument {
            meta,
            comments: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Add a `# key: value` style metadata line.
    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render(&self) -> String {
        let mut s = self.meta.header_lines(&self.comments);
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(',');
                }
                let _ = write!(s, "{v}");
                first = false;
            }
            s.push('\n');
        }
        s
    }

    /// Write to the path (atomic) or stdout when no path is given.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        emit_text(&self.render(), out)
    }
}

/// Render a serde value as pretty JSON with a trailing newline.
pub fn render_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| crate::error::Error::Numerical(format!("json encoding: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Write text atomically to a path, or to stdout when no path is given.
pub fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => write_atomic(path, text),
    }
}

/// Write-then-rename so the file appears complete or not at all.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp_path, text)?;
    std::fs::rename(&tmp_path, path)?;
    Ok(())
}
