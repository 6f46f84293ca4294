//! Name-keyed registry of interchangeable strategies.

use std::collections::BTreeMap;

use crate::error::{DpgError, Result};

/// Maps names to factories producing boxed strategy objects.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, fn() -> Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: fn() -> Box<T>) -> &mut Self {
        self.entries.insert(name, factory);
        self
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn create(&self, name: &str) -> Result<Box<T>> {
        self.entries
            .get(name)
            .map(|f| f())
            .ok_or_else(|| DpgError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter {
        fn hello(&self) -> &'static str;
    }
    struct En;
    impl Greeter for En {
        fn hello(&self) -> &'static str {
            "hello"
        }
    }

    #[test]
    fn create_by_name() {
        let mut r: Registry<dyn Greeter> = Registry::new("greeter");
        r.register("en", || Box::new(En));
        assert_eq!(r.create("en").unwrap().hello(), "hello");
        let err = r.create("fr").err().unwrap().to_string();
        assert!(err.contains("greeter") && err.contains("en"), "{err}");
    }
}
