use std::collections::HashMap;

use crate::error::{structural, Result};
use crate::graded::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: Degree,
}

/// Ordered list of named generators. The order is the canonical monomial order.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    entries: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for GeneratorTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for GeneratorTable {}

impl GeneratorTable {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Degree)>,
        S: Into<String>,
    {
        let entries: Vec<Generator> = entries
            .into_iter()
            .map(|(name, degree)| Generator { name: name.into(), degree })
            .collect();
        let mut index = HashMap::with_capacity(entries.len());
        for (i, g) in entries.iter().enumerate() {
            if g.name.is_empty() {
                return Err(structural!("generator {i} has an empty name"));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(structural!("duplicate generator name {:?}", g.name));
            }
        }
        Ok(GeneratorTable { entries, index })
    }

    pub fn empty() -> Self {
        GeneratorTable { entries: Vec::new(), index: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.entries[i]
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.entries[i].degree
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.entries.iter()
    }

    /// Concatenation; names must stay unique.
    pub fn concat(&self, other: &GeneratorTable) -> Result<Self> {
        GeneratorTable::new(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|g| (g.name.clone(), g.degree)),
        )
    }
}
