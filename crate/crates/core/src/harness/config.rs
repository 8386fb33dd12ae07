//! Flat `key = value` files with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parsed entries; typed getters remove keys so leftovers can be reported.
#[derive(Clone, Debug, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse { line: i + 1, message: format!("expected `key = value`, got `{line}`") });
            };
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, message: "empty key".into() });
            }
            if entries.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate key `{key}`") });
            }
        }
        Ok(ConfigMap { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn take_str(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e| Error::Parse { line, message: format!("`{key}`: {e}") }),
        }
    }

    pub fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.take(key)?.unwrap_or(default))
    }

    /// Comma separated list.
    pub fn take_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|e| Error::Parse { line, message: format!("`{key}`: {e}") }))
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Fails with every key no getter consumed.
    pub fn finish(self) -> Result<()> {
        if self.entries.is_empty() {
            Ok(())
        } else {
            Err(Error::UnknownKeys(self.entries.into_keys().collect()))
        }
    }
}
