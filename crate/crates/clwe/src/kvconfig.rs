//! Flat key-value config text with section-prefixed keys
//! (`stage1.csls_k = 10`), `#` comments, and strict unknown-key rejection so
//! experiment manifests stay typo-free and diff cleanly.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KvConfig {
    values: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value, got {raw:?}", idx + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::InvalidConfig(format!("line {}: empty key", idx + 1)));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::InvalidConfig(format!(
                    "line {}: duplicate key {key:?}",
                    idx + 1
                )));
            }
        }
        Ok(KvConfig { values })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets or replaces a key (CLI flags override file values).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Removes and returns a raw value.
    pub fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    /// Removes and parses a value, reporting the key on failure.
    pub fn take_parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("key {key:?}: cannot parse value {raw:?}"))
            }),
        }
    }

    pub fn take_bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => match raw.as_str() {
                "true" | "1" | "yes" => Ok(Some(true)),
                "false" | "0" | "no" => Ok(Some(false)),
                other => Err(Error::InvalidConfig(format!(
                    "key {key:?}: expected boolean, got {other:?}"
                ))),
            },
        }
    }

    /// Rejects any keys nobody consumed.
    pub fn ensure_consumed(&self) -> Result<()> {
        if let Some(key) = self.values.keys().next() {
            return Err(Error::InvalidConfig(format!("unknown key {key:?}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let mut kv =
            KvConfig::parse("# comment\nseed = 7\nstage1.csls_k=10\n\ntrain.dim = 32\n").unwrap();
        assert_eq!(kv.take_parse::<u64>("seed").unwrap(), Some(7));
        assert_eq!(kv.take_parse::<usize>("stage1.csls_k").unwrap(), Some(10));
        assert_eq!(kv.take_parse::<usize>("train.dim").unwrap(), Some(32));
        kv.ensure_consumed().unwrap();
    }

    #[test]
    fn rejects_unknown_keys() {
        let kv = KvConfig::parse("mystery = 1\n").unwrap();
        assert!(matches!(kv.ensure_consumed(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn rejects_duplicates_and_malformed() {
        assert!(KvConfig::parse("a = 1\na = 2\n").is_err());
        assert!(KvConfig::parse("just a line\n").is_err());
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut kv = KvConfig::parse("seed = 7\n").unwrap();
        kv.set("seed", "9");
        assert_eq!(kv.take_parse::<u64>("seed").unwrap(), Some(9));
    }
}
