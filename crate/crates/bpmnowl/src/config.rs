//! Optional TOML configuration. Command-line flags take precedence.
//!
//! ```toml
//! extension = "ext.owl"       # relative to this file
//! table = "table.txt"
//! format = "jsonl"
//!
//! [severity]
//! warn_kinds = ["unknown-class"]
//! warn_subjects = ["bpmn2:Process"]
//!
//! [run]
//! max_steps = 500
//! ```

use std::path::{Path, PathBuf};

use bpmnowl_core::verify::{FindingKind, SeverityPolicy};
use serde::Deserialize;

use crate::corpus::ReportFormat;
use crate::files::{at, read_text, InputError};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub extension: Option<PathBuf>,
    pub table: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    #[serde(default)]
    pub severity: SeverityConfig,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeverityConfig {
    #[serde(default)]
    pub warn_kinds: Vec<String>,
    #[serde(default)]
    pub warn_subjects: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub max_steps: Option<usize>,
}

impl Config {
    /// Parse `path`; relative paths inside are resolved against its directory.
    pub fn load(path: &Path) -> Result<Config, InputError> {
        let mut config: Config = toml::from_str(&read_text(path)?).map_err(at(path))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut config.extension, &mut config.table].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn policy(&self) -> Result<SeverityPolicy, String> {
        let warn_kinds = self
            .severity
            .warn_kinds
            .iter()
            .map(|k| k.parse::<FindingKind>())
            .collect::<Result<_, _>>()?;
        Ok(SeverityPolicy {
            warn_kinds,
            warn_subjects: self.severity.warn_subjects.iter().cloned().collect(),
        })
    }
}
