//! On-disk result cache keyed by fingerprint and backend.

use std::path::{Path, PathBuf};

use super::persist::{load, persist, PersistError};
use super::report::{Backend, SearchReport};

pub const CACHE_ENV: &str = "SHARP_CACHE_DIR";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn cache_path(dir: &Path, fingerprint: &str, backend: Backend) -> PathBuf {
    dir.join(format!("{fingerprint}-{backend}.json"))
}

/// A cached complete report, re-verified on load. Unreadable or invalid
/// entries count as misses.
pub fn lookup(dir: &Path, fingerprint: &str, backend: Backend) -> Option<SearchReport> {
    let (report, _) = load(&cache_path(dir, fingerprint, backend)).ok()?;
    report.shard_map.is_complete().then_some(report)
}

pub fn store(dir: &Path, report: &SearchReport) -> Result<PathBuf, PersistError> {
    std::fs::create_dir_all(dir)?;
    let path = cache_path(dir, &report.fingerprint, report.backend);
    persist(&path, report, None)?;
    Ok(path)
}
