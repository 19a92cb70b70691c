//! CSV tables, key/value reports and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest decimal that parses back to exactly `v`.
pub fn exact(v: f64) -> String {
    format!("{v}")
}

/// `v` rounded to 12 significant digits, for human-facing reports.
pub fn rounded(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let r: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{r}")
}

/// Numeric CSV: header, comma separated, `\n` endings, no quoting.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(exact).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn key_values<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{} = {}", k.as_ref(), v.as_ref());
    }
    s
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

/// Writes `out` and its manifest. The manifest is itself a valid config
/// file for `command`, so replaying it regenerates `out`.
pub fn write_with_manifest(
    command: &str,
    out: &Path,
    contents: &str,
    resolved: &[(String, String)],
) -> Result<PathBuf, CliError> {
    fs::write(out, contents)?;
    let mut pairs = vec![
        ("command".to_string(), command.to_string()),
        ("version".to_string(), VERSION.to_string()),
    ];
    pairs.extend(resolved.iter().cloned());
    let path = manifest_path(out);
    fs::write(&path, key_values(&pairs))?;
    Ok(path)
}
