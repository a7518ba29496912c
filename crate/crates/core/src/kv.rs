//! `key=value` line grammar shared by config files and event headers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Splits one `key=value` line. Whitespace around key and value is dropped.
pub fn split_line(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once('=')?;
    let key = key.trim();
    if key.is_empty() {
        return None;
    }
    Some((key, value.trim()))
}

/// Parses a config file body. Blank lines and `#` comment lines are skipped;
/// repeated keys are an error.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = split_line(line).ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected key=value, got `{line}`", n + 1))
        })?;
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::InvalidConfig(format!(
                "line {}: duplicate key `{key}`",
                n + 1
            )));
        }
    }
    Ok(map)
}
