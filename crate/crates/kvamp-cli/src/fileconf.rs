//! Optional `key = value` config files mirroring the long flag names.
//! Flags given on the command line always win over file entries.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::units::parse_size;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    entries: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn empty() -> Self {
        FileConfig::default()
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::io(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::usage(format!("config entry `{key} = {v}` is not a valid value"))
            }),
        }
    }

    pub fn f64(&self, key: &str) -> CliResult<Option<f64>> {
        self.parsed(key)
    }

    pub fn u64(&self, key: &str) -> CliResult<Option<u64>> {
        self.parsed(key)
    }

    pub fn u32(&self, key: &str) -> CliResult<Option<u32>> {
        self.parsed(key)
    }

    pub fn bool(&self, key: &str) -> CliResult<Option<bool>> {
        self.parsed(key)
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.entries.get(key).cloned()
    }

    pub fn size(&self, key: &str) -> CliResult<Option<u128>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => parse_size(v).map(Some),
        }
    }
}
