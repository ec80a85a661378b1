//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`, with `#` starting a comment line. Keys are
//! dotted (`scenario.alpha`). Every key in the file must be read by the
//! subcommand; leftovers are reported as unknown. The values actually used,
//! defaults included, form the effective configuration recorded next to
//! every artifact; feeding that record back reproduces the run.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Keys that steer execution but not results; never recorded.
const EXECUTION_KEYS: [&str; 1] = ["workers"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                return Err(CliError::config(format!("config line {}: invalid key '{key}'", i + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::config(format!("config line {}: duplicate key '{key}'", i + 1)));
            }
        }
        Ok(RawConfig { entries })
    }

    /// Reads the `config` object of a metadata sidecar (or a flat object).
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("config JSON: {e}")))?;
        let obj = value.get("config").unwrap_or(&value);
        let map = obj.as_object().ok_or_else(|| CliError::config("config JSON must be an object"))?;
        let entries = map
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect();
        Ok(RawConfig { entries })
    }

    /// Loads a `.json` sidecar or a key-value file.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::parse(&text)
        }
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// Typed access that remembers which keys were read and what was used.
#[derive(Debug)]
pub struct Keys<'a> {
    raw: &'a RawConfig,
    read: RefCell<BTreeSet<String>>,
    effective: RefCell<BTreeMap<String, String>>,
}

impl<'a> Keys<'a> {
    pub fn new(raw: &'a RawConfig) -> Self {
        Keys { raw, read: RefCell::default(), effective: RefCell::default() }
    }

    fn record(&self, key: &str, value: String) {
        if !EXECUTION_KEYS.contains(&key) {
            self.effective.borrow_mut().insert(key.to_string(), value);
        }
    }

    fn lookup(&self, key: &str) -> Option<&'a str> {
        self.read.borrow_mut().insert(key.to_string());
        self.raw.get(key)
    }

    fn parse_value<T: FromStr>(key: &str, s: &str) -> CliResult<T>
    where
        T::Err: Display,
    {
        s.parse::<T>().map_err(|e| CliError::config(format!("{key}: cannot parse '{s}': {e}")))
    }

    /// Optional value; absent keys are not recorded.
    pub fn opt<T: FromStr + Display>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        match self.lookup(key) {
            None => Ok(None),
            Some(s) => {
                let v: T = Self::parse_value(key, s)?;
                self.record(key, v.to_string());
                Ok(Some(v))
            }
        }
    }

    pub fn or<T: FromStr + Display>(&self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: Display,
    {
        let v = self.opt(key)?.unwrap_or(default);
        self.record(key, v.to_string());
        Ok(v)
    }

    pub fn required<T: FromStr + Display>(&self, key: &str) -> CliResult<T>
    where
        T::Err: Display,
    {
        self.opt(key)?.ok_or_else(|| CliError::config(format!("missing required key '{key}'")))
    }

    /// Comma-separated list; absent keys are not recorded.
    pub fn opt_list<T: FromStr + Display>(&self, key: &str) -> CliResult<Option<Vec<T>>>
    where
        T::Err: Display,
    {
        let Some(s) = self.lookup(key) else { return Ok(None) };
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| Self::parse_value(key, p))
            .collect::<CliResult<Vec<T>>>()?;
        if items.is_empty() {
            return Err(CliError::config(format!("{key}: empty list")));
        }
        self.record(key, join(&items));
        Ok(Some(items))
    }

    pub fn list_or<T: FromStr + Display>(&self, key: &str, default: Vec<T>) -> CliResult<Vec<T>>
    where
        T::Err: Display,
    {
        let v = self.opt_list(key)?.unwrap_or(default);
        self.record(key, join(&v));
        Ok(v)
    }

    /// Fails on any key that was never read.
    pub fn finish(self) -> CliResult<BTreeMap<String, String>> {
        let read = self.read.into_inner();
        let unknown: Vec<&str> =
            self.raw.entries.keys().filter(|k| !read.contains(k.as_str())).map(String::as_str).collect();
        if !unknown.is_empty() {
            return Err(CliError::config(format!("unknown config key(s): {}", unknown.join(", "))));
        }
        Ok(self.effective.into_inner())
    }
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Renders an effective configuration back to key-value text.
pub fn to_text(effective: &BTreeMap<String, String>) -> String {
    effective.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_tracks_keys() {
        let raw = RawConfig::parse("# comment\nscenario.alpha = 0.76\n\nrun.methods=HC, MinP\n").unwrap();
        let keys = Keys::new(&raw);
        assert_eq!(keys.required::<f64>("scenario.alpha").unwrap(), 0.76);
        assert_eq!(keys.opt_list::<String>("run.methods").unwrap().unwrap(), vec!["HC", "MinP"]);
        assert_eq!(keys.or("run.level", 0.05).unwrap(), 0.05);
        let eff = keys.finish().unwrap();
        assert_eq!(eff["run.level"], "0.05");
        assert_eq!(eff["run.methods"], "HC,MinP");
    }

    #[test]
    fn unknown_keys_are_errors() {
        let raw = RawConfig::parse("scenario.alpah = 0.7\n").unwrap();
        let keys = Keys::new(&raw);
        keys.or("scenario.alpha", 0.76).unwrap();
        let err = keys.finish().unwrap_err();
        assert!(err.to_string().contains("scenario.alpah"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn malformed_lines() {
        assert!(RawConfig::parse("just words\n").is_err());
        assert!(RawConfig::parse("a = 1\na = 2\n").is_err());
        assert!(RawConfig::parse("bad key = 1\n").is_err());
        let raw = RawConfig::parse("n = ten\n").unwrap();
        assert!(Keys::new(&raw).required::<usize>("n").is_err());
    }

    #[test]
    fn effective_config_round_trips() {
        let raw = RawConfig::parse("seed = 4\nx.list = 1, 2.5\nworkers = 3\n").unwrap();
        let keys = Keys::new(&raw);
        keys.required::<u64>("seed").unwrap();
        keys.opt_list::<f64>("x.list").unwrap();
        keys.opt::<usize>("workers").unwrap();
        let eff = keys.finish().unwrap();
        assert!(!eff.contains_key("workers"));
        let again = RawConfig::parse(&to_text(&eff)).unwrap();
        let json = serde_json::json!({ "config": eff });
        assert_eq!(RawConfig::from_json(&json.to_string()).unwrap(), again);
    }
}
