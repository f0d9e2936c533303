//! Total maps on a finite point set, the concrete elements most chains use.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A total transformation of `{0, .., degree-1}`, stored as its value table.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Transformation {
    table: Vec<usize>,
}

impl Transformation {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("transformation on zero points".into()));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= n) {
            return Err(Error::Invalid(format!(
                "transformation maps to point {bad}, outside 0..{n}"
            )));
        }
        Ok(Self { table })
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            table: (0..degree).collect(),
        }
    }

    /// Constant map sending every point to `target`.
    pub fn constant(degree: usize, target: usize) -> Self {
        Self {
            table: vec![target; degree],
        }
    }

    pub fn degree(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Composition `self . other` (apply `other` first). This is the product
    /// used throughout: the word `ua` acts by `a` first, then `u`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            table: other.table.iter().map(|&x| self.table[x]).collect(),
        }
    }

    /// `Some(target)` when the map is constant.
    pub fn constant_value(&self) -> Option<usize> {
        let first = self.table[0];
        self.table.iter().all(|&v| v == first).then_some(first)
    }
}

/// Ordered generator labels, optionally weighted with exact probabilities.
/// Without weights the alphabet is "formal": each letter is a distinct
/// series variable.
#[derive(Clone, Debug)]
pub struct Alphabet {
    labels: Vec<String>,
    probs: Option<Vec<crate::ratio::Q>>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>, probs: Option<Vec<crate::ratio::Q>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invalid("alphabet must not be empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Invalid(format!("duplicate generator label `{l}`")));
            }
        }
        if let Some(x) = &probs {
            if x.len() != labels.len() {
                return Err(Error::Invalid(format!(
                    "{} probabilities for {} letters",
                    x.len(),
                    labels.len()
                )));
            }
            crate::ratio::check_stochastic(x)?;
        }
        Ok(Self { labels, probs })
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len() as i64;
        let probs = (0..n).map(|_| crate::ratio::qr(1, n)).collect();
        Self::new(labels, Some(probs))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn require_index(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::Invalid(format!("unknown letter {label:?}")))
    }

    pub fn probs(&self) -> Option<&[crate::ratio::Q]> {
        self.probs.as_deref()
    }

    /// Probabilities, or an error in formal mode.
    pub fn probs_required(&self) -> Result<&[crate::ratio::Q]> {
        self.probs.as_deref().ok_or_else(|| {
            Error::Invalid("operation needs probabilities, alphabet is formal".into())
        })
    }
}
