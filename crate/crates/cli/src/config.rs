//! Flat `key = value` configuration files. Command-line flags win over file
//! entries; keys may use `-` or `_`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = normalize(k);
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", n + 1)));
            }
        }
        Ok(ConfigFile { entries })
    }

    /// Removes and parses `key`, if present.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    /// Fails on any entry no subcommand consumed.
    pub fn finish(self) -> Result<(), CliError> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => Err(CliError::Usage(format!("unknown config key `{k}`"))),
        }
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

/// `opt` if set, else the parsed config entry.
pub fn merge<T: FromStr>(opt: Option<T>, cfg: &mut ConfigFile, key: &str) -> Result<Option<T>, CliError> {
    let from_file = cfg.take::<T>(key)?;
    Ok(opt.or(from_file))
}
