use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::config::Suite;
use crate::error::CliError;
use crate::report::{report_file_name, SuiteReport, REPORT_VERSION};

/// Per-`(suite, prime)` report files under one directory.
#[derive(Debug, Clone)]
pub struct ReportCache {
    dir: PathBuf,
}

impl ReportCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ReportCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, suite: Suite, prime: u64) -> PathBuf {
        self.dir.join(report_file_name(suite, prime))
    }

    /// A stored report for the same suite, prime and version, if readable.
    /// Unreadable or stale files count as absent.
    pub fn load(&self, suite: Suite, prime: u64) -> Option<SuiteReport> {
        let text = fs::read_to_string(self.path(suite, prime)).ok()?;
        let report: SuiteReport = serde_json::from_str(&text).ok()?;
        (report.suite == suite && report.prime == prime && report.version == REPORT_VERSION)
            .then_some(report)
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// over the target.
    pub fn store(&self, report: &SuiteReport) -> Result<PathBuf, CliError> {
        let target = self.path(report.suite, report.prime);
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(report.to_json()?.as_bytes())?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(&target).map_err(|e| CliError::Io(e.error))?;
        Ok(target)
    }
}
