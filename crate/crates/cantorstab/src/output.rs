//! Atomic file output and budget scaling from the environment.

use std::io::Write;
use std::path::Path;

use cantorstab_core::Budgets;

use crate::error::CliError;

pub const BUDGET_SCALE_VAR: &str = "CANTORSTAB_BUDGET_SCALE";

/// Writes `contents` to a temporary file next to `path`, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Parses a budget scale. It must be a finite positive number.
pub fn parse_scale(raw: &str) -> Result<f64, CliError> {
    match raw.trim().parse::<f64>() {
        Ok(f) if f.is_finite() && f > 0.0 => Ok(f),
        _ => Err(CliError::Parse(format!("{BUDGET_SCALE_VAR} must be a positive number, got {raw:?}"))),
    }
}

/// Applies the scale from the environment, if set.
pub fn scale_from_env(budgets: Budgets) -> Result<Budgets, CliError> {
    match std::env::var(BUDGET_SCALE_VAR) {
        Ok(raw) => Ok(budgets.scaled(parse_scale(&raw)?)),
        Err(_) => Ok(budgets),
    }
}
