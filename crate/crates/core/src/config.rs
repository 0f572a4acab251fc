//! Line-oriented `key = value` configuration.
//!
//! `#` starts a comment, blank lines are skipped, strings are unquoted and
//! numbers are decimal or scientific. Keys are checked against a schema;
//! duplicates, unknown keys and malformed numbers are errors carrying the
//! 1-based line number.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Number,
    /// Non-negative integer (scientific notation allowed if integral).
    Integer,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub line: usize,
    pub value: Value,
}

/// Keys understood by `scs evolve --config`.
pub const EVOLVE_SCHEMA: &[(&str, KeyKind)] = &[
    ("nx", KeyKind::Integer),
    ("dx", KeyKind::Number),
    ("dt", KeyKind::Number),
    ("steps", KeyKind::Integer),
    ("m_delta", KeyKind::Number),
    ("g_delta", KeyKind::Number),
    ("sign", KeyKind::Text),
    ("boundary", KeyKind::Text),
    ("ic", KeyKind::Text),
    ("snapshot_every", KeyKind::Integer),
    ("rho0", KeyKind::Number),
    ("x0", KeyKind::Number),
];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub parameters: BTreeMap<String, Entry>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, EVOLVE_SCHEMA)
}

pub fn parse_config_with(text: &str, schema: &[(&str, KeyKind)]) -> Result<RunConfig> {
    let mut parameters = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Config { line, reason };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err("empty key".into()));
        }
        let kind = schema
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, kind)| *kind)
            .ok_or_else(|| err(format!("unknown key `{key}`")))?;
        if parameters.contains_key(key) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let value = match kind {
            KeyKind::Text => Value::Text(value.to_string()),
            KeyKind::Number | KeyKind::Integer => {
                let v: f64 = value
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| err(format!("malformed number `{value}` for `{key}`")))?;
                if kind == KeyKind::Integer && !(v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
                    return Err(err(format!("`{key}` must be a non-negative integer, got `{value}`")));
                }
                Value::Number(v)
            }
        };
        parameters.insert(key.to_string(), Entry { line, value });
    }
    Ok(RunConfig { parameters })
}

impl RunConfig {
    pub fn contains(&self, key: &str) -> bool {
        self.parameters.contains_key(key)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.parameters.get(key).map(|e| &e.value) {
            Some(Value::Number(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.parameters.get(key).map(|e| &e.value) {
            Some(Value::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn line(&self, key: &str) -> usize {
        self.parameters.get(key).map_or(0, |e| e.line)
    }

    pub fn require_number(&self, key: &str) -> Result<f64> {
        self.number(key).ok_or_else(|| Error::Config {
            line: 0,
            reason: format!("missing required key `{key}`"),
        })
    }

    pub fn require_usize(&self, key: &str) -> Result<usize> {
        self.require_number(key).map(|v| v as usize)
    }
}
