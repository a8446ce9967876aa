use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// An ordered set of variable names shared by every expression of one
/// computation. The ordering is fixed at construction and defines the
/// graded-lex term order used everywhere downstream.
#[derive(Debug)]
pub struct VarSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

/// Cheap shared handle to a [`VarSet`]. Two expressions may be combined
/// only when their contexts agree (same allocation or same name list).
#[derive(Clone, Debug)]
pub struct Context(Arc<VarSet>);

impl Context {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, Error> {
        let mut index = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(n));
            }
            owned.push(n);
        }
        Ok(Context(Arc::new(VarSet {
            names: owned,
            index,
        })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize, Error> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.index.contains_key(name)
    }

    /// A new context with `extra` names appended after the existing ones.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self, Error> {
        let mut names: Vec<String> = self.0.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Context::new(&names)
    }

    pub fn same(&self, other: &Context) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.names == other.0.names
    }

    pub fn ensure_same(&self, other: &Context) -> Result<(), Error> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}
impl Eq for Context {}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_names() {
        assert!(Context::new(&["q1", "q2", "q1"]).is_err());
    }

    #[test]
    fn extend_preserves_prefix_order() {
        let c = Context::new(&["q1", "q2"]).unwrap();
        let e = c.extend(&["p1"]).unwrap();
        assert_eq!(e.names(), &["q1", "q2", "p1"]);
        assert_eq!(e.index("q2").unwrap(), 1);
        assert!(!c.same(&e));
    }
}
