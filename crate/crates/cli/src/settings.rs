//! Flat `key = value` settings shared by config files, flags and manifests.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::CliError;

/// Keys that may appear in a file without being a flag of the command.
pub const RESERVED: [&str; 2] = ["command", "version"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value', got '{line}'", i + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// Reads typed values and records each resolved value in lookup order.
pub struct Resolver<'a> {
    settings: &'a Settings,
    resolved: Vec<(String, String)>,
}

impl<'a> Resolver<'a> {
    pub fn new(settings: &'a Settings) -> Self {
        Self {
            settings,
            resolved: Vec::new(),
        }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.settings.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("--{key}: cannot parse '{raw}'"))),
        }
    }

    pub fn required<T: FromStr + Display>(&mut self, key: &str) -> Result<T, CliError> {
        let v = self
            .parse::<T>(key)?
            .ok_or_else(|| CliError::Config(format!("--{key} is required")))?;
        self.resolved.push((key.to_string(), v.to_string()));
        Ok(v)
    }

    pub fn or<T: FromStr + Display>(&mut self, key: &str, default: T) -> Result<T, CliError> {
        let v = self.parse::<T>(key)?.unwrap_or(default);
        self.resolved.push((key.to_string(), v.to_string()));
        Ok(v)
    }

    pub fn optional<T: FromStr + Display>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        let v = self.parse::<T>(key)?;
        if let Some(v) = &v {
            self.resolved.push((key.to_string(), v.to_string()));
        }
        Ok(v)
    }

    pub fn resolved(&self) -> &[(String, String)] {
        &self.resolved
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let s = Settings::parse("# run\nalpha = 1.2\n\n  seed=7  \nout = a b.csv\n").unwrap();
        assert_eq!(s.get("alpha"), Some("1.2"));
        assert_eq!(s.get("seed"), Some("7"));
        assert_eq!(s.get("out"), Some("a b.csv"));
        assert!(Settings::parse("alpha 1.2").is_err());
        assert!(Settings::parse(" = 3").is_err());
    }

    #[test]
    fn resolver_records_defaults_and_values() {
        let s = Settings::parse("alpha = 1.20\n").unwrap();
        let mut r = Resolver::new(&s);
        assert_eq!(r.required::<f64>("alpha").unwrap(), 1.2);
        assert_eq!(r.or("eta", 1.1f64).unwrap(), 1.1);
        assert_eq!(r.optional::<u64>("seed").unwrap(), None);
        assert!(r.required::<f64>("hurst").is_err());
        assert_eq!(
            r.resolved(),
            &[("alpha".to_string(), "1.2".to_string()), ("eta".to_string(), "1.1".to_string())]
        );
    }

    #[test]
    fn unparsable_value_names_the_flag() {
        let s = Settings::parse("alpha = x\n").unwrap();
        match Resolver::new(&s).required::<f64>("alpha") {
            Err(CliError::Config(m)) => assert!(m.contains("--alpha")),
            other => panic!("{other:?}"),
        }
    }
}
