//! Finite ordered parameter sets: the index set of every soft object.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SoftError};

/// A finite, ordered set of distinct parameter labels.
///
/// The label order is fixed at construction; it determines the storage layout
/// of every soft object and the order in which witnesses are selected, so
/// results are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParameterSet {
    labels: Vec<String>,
}

impl ParameterSet {
    /// Builds a parameter set from distinct, non-empty labels.
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(SoftError::InvalidInput(
                "parameter set must be non-empty".into(),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SoftError::InvalidInput(format!(
                    "duplicate parameter label {l:?}"
                )));
            }
        }
        Ok(Arc::new(ParameterSet { labels }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced non-empty at construction
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    /// True when every label of `self` occurs in `other` (order-insensitive).
    pub fn is_label_subset_of(&self, other: &ParameterSet) -> bool {
        self.labels().all(|l| other.contains(l))
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// Checks that two soft objects share a parameter set (same labels, same order).
pub(crate) fn require_same_params(a: &Arc<ParameterSet>, b: &Arc<ParameterSet>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(SoftError::ParameterMismatch(format!("{a} vs {b}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(ParameterSet::new(Vec::<String>::new()).is_err());
        assert!(ParameterSet::new(["a", "b", "a"]).is_err());
    }

    #[test]
    fn order_is_stable() {
        let ps = ParameterSet::new(["b", "a"]).unwrap();
        assert_eq!(ps.label(0), "b");
        assert_eq!(ps.index_of("a"), Some(1));
        assert_eq!(ps.len(), 2);
    }
}
