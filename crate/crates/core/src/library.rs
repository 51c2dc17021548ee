//! Named constraint collections.

use std::collections::BTreeMap;

use crate::constraint::{builtin, ConstraintTable};
use crate::error::{Error, Result};

/// An ordered set of named constraints. Builtin names resolve even when not
/// inserted explicitly, and cannot be redefined.
#[derive(Clone, Debug, Default)]
pub struct Library {
    tables: Vec<ConstraintTable>,
    by_name: BTreeMap<String, usize>,
}

impl Library {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, table: ConstraintTable) -> Result<()> {
        let name = table
            .name()
            .ok_or_else(|| Error::arg("library entries need a name"))?
            .to_string();
        if builtin::NAMES.contains(&name.as_str()) {
            return Err(Error::arg(format!("`{name}` is a reserved builtin name")));
        }
        if self.by_name.contains_key(&name) {
            return Err(Error::arg(format!("constraint `{name}` defined twice")));
        }
        self.by_name.insert(name, self.tables.len());
        self.tables.push(table);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<ConstraintTable> {
        match self.by_name.get(name) {
            Some(&i) => Some(self.tables[i].clone()),
            None => builtin::by_name(name),
        }
    }

    /// User-defined entries in insertion order.
    pub fn tables(&self) -> &[ConstraintTable] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

impl FromIterator<ConstraintTable> for Result<Library> {
    fn from_iter<I: IntoIterator<Item = ConstraintTable>>(iter: I) -> Self {
        let mut lib = Library::new();
        for t in iter {
            lib.insert(t)?;
        }
        Ok(lib)
    }
}
