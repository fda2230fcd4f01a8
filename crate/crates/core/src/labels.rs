//! Leaf-label dictionaries mapping taxon names to the integers `1..=N`.

use std::collections::HashMap;

use crate::error::{BhvError, Result};
use crate::split::check_leaf_count;

/// An order-stable mapping from leaf names to integer labels. The leaf at
/// position `i` of the dictionary is label `i + 1`. Every tree in one
/// analysis must be read through the same dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDict {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelDict {
    pub fn new<I, S>(names: I) -> Result<LabelDict>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        check_leaf_count(names.len()).map_err(|e| BhvError::Label(e.to_string()))?;
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(BhvError::Label(format!("empty leaf name at position {i}")));
            }
            if index.insert(name.clone(), i + 1).is_some() {
                return Err(BhvError::Label(format!("duplicate leaf name {name:?}")));
            }
        }
        Ok(LabelDict { names, index })
    }

    /// Dictionary whose names are the integers `1..=n` themselves.
    pub fn numeric(n: usize) -> Result<LabelDict> {
        LabelDict::new((1..=n).map(|i| i.to_string()))
    }

    /// Parses a JSON array of leaf names.
    pub fn from_json(text: &str) -> Result<LabelDict> {
        let names: Vec<String> = serde_json::from_str(text)
            .map_err(|e| BhvError::Label(format!("expected a JSON array of strings: {e}")))?;
        LabelDict::new(names)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.names).expect("string arrays always serialize")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn label_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name_of(&self, label: usize) -> Option<&str> {
        label
            .checked_sub(1)
            .and_then(|i| self.names.get(i))
            .map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}
