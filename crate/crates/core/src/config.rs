//! Flat `section.key = value` configuration files.
//!
//! ```text
//! # comment
//! common.seed = 7
//! estimate-gamma.alpha = 0.6
//! estimate-gamma.lambda = 0.4, 0.3, 0.2
//! ```
//!
//! The section is a subcommand name or `common`. Command-line flags take
//! precedence over the file, and the file over built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected `section.key = value`", i + 1)))?;
            let key = key.trim();
            if !key.contains('.') || key.starts_with('.') || key.ends_with('.') {
                return Err(Error::Parse(format!("config line {}: key `{key}` must be `section.key`", i + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("config line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries.get(&format!("{section}.{key}")).map(String::as_str)
    }

    /// Keys of `section`, for rejecting unknown entries.
    pub fn keys_in<'a>(&'a self, section: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries.keys().filter_map(move |k| k.strip_prefix(section)?.strip_prefix('.'))
    }
}
