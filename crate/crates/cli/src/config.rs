//! `key = value` config files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Values may be wrapped in double quotes. Keys use `snake_case` and mirror
//! the long flag names. Command-line flags win over file values.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    origin: String,
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("{origin}:{}: expected 'key = value'", i + 1)))?;
            let key = key.trim();
            let mut value = value.trim();
            if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
                value = &value[1..value.len() - 1];
            }
            if key.is_empty() {
                return Err(CliError::config(format!("{origin}:{}: empty key", i + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::config(format!("{origin}:{}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(Self { origin: origin.to_string(), entries })
    }

    /// Rejects keys the command does not understand, so typos do not pass silently.
    pub fn ensure_known(&self, allowed: &[&str]) -> CliResult<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::config(format!("{}: unknown key '{k}'", self.origin))),
            None => Ok(()),
        }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| v.parse().map_err(|e| CliError::config(format!("{}: key '{key}': {e}", self.origin))))
            .transpose()
    }

    pub fn get_list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.entries.get(key).map(|v| parse_list(v)).transpose()
    }

    pub fn get_bool(&self, key: &str) -> CliResult<Option<bool>> {
        self.get(key)
    }
}

/// Parses `"1, 2.5,-3"` into numbers.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    let out = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| CliError::config(format!("bad number '{}': {e}", x.trim()))))
        .collect::<CliResult<Vec<_>>>()?;
    if out.is_empty() {
        return Err(CliError::config("empty list"));
    }
    Ok(out)
}
