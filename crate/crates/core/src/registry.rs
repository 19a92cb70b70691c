//! Name-keyed registry of interchangeable strategies.
//!
//! Fractional Brownian motion generators and path simulation methods are
//! each exposed behind a trait object and looked up by name at runtime, so
//! the CLI and config files can select them with a plain string.

use crate::error::{Error, Result};

/// Implemented by every strategy that can live in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Registers a strategy, replacing any earlier entry with the same name.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    /// Removes and returns the named strategy.
    pub fn take(mut self, name: &str) -> Result<Box<T>> {
        match self.entries.iter().position(|e| e.name() == name) {
            Some(i) => Ok(self.entries.swap_remove(i)),
            None => Err(Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Op: Named {
        fn apply(&self, x: i32) -> i32;
    }

    struct Double;
    impl Named for Double {
        fn name(&self) -> &'static str {
            "double"
        }
    }
    impl Op for Double {
        fn apply(&self, x: i32) -> i32 {
            2 * x
        }
    }

    struct Negate;
    impl Named for Negate {
        fn name(&self) -> &'static str {
            "negate"
        }
    }
    impl Op for Negate {
        fn apply(&self, x: i32) -> i32 {
            -x
        }
    }

    #[test]
    fn lookup_by_name() {
        let mut reg: Registry<dyn Op> = Registry::new("op");
        reg.register(Box::new(Double)).register(Box::new(Negate));
        assert_eq!(reg.get("double").unwrap().apply(3), 6);
        assert_eq!(reg.get("negate").unwrap().apply(3), -3);
        assert_eq!(reg.names(), vec!["double", "negate"]);
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let mut reg: Registry<dyn Op> = Registry::new("op");
        reg.register(Box::new(Double));
        let err = reg.get("triple").err().unwrap();
        assert!(err.to_string().contains("double"));
    }

    #[test]
    fn re_registering_replaces() {
        let mut reg: Registry<dyn Op> = Registry::new("op");
        reg.register(Box::new(Double)).register(Box::new(Double));
        assert_eq!(reg.len(), 1);
    }
}
