use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("coordinate name `{0}` is not an identifier")]
    BadName(String),
    #[error("coordinate name `{0}` is repeated")]
    Duplicate(String),
}

/// Local coordinates of a single chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<I, S>(names: I) -> Result<Self, ChartError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !is_identifier(n) {
                return Err(ChartError::BadName(n.clone()));
            }
            if !seen.insert(n.as_str()) {
                return Err(ChartError::Duplicate(n.clone()));
            }
        }
        Ok(Chart { names })
    }

    /// Zero-dimensional chart (a point).
    pub fn point() -> Self {
        Chart { names: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, axis: usize) -> &str {
        &self.names[axis]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}
