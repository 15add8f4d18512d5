//! Mode indices `(k, α)` and their flat encoding.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite ordered set of ramification labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamLabels {
    labels: Vec<String>,
}

impl RamLabels {
    /// Builds a label set; labels must be distinct and nonempty.
    pub fn new(labels: Vec<String>) -> Self {
        assert!(!labels.is_empty(), "label set must be nonempty");
        for (i, a) in labels.iter().enumerate() {
            assert!(!labels[..i].contains(a), "duplicate label {a}");
        }
        RamLabels { labels }
    }

    /// A single label named `"0"`.
    pub fn single() -> Self {
        Self::numbered(1)
    }

    /// Labels `"0"`, `"1"`, ... `"n-1"`.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    /// Number of labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; label sets are nonempty.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Name of label number `alpha`.
    pub fn name(&self, alpha: usize) -> &str {
        &self.labels[alpha]
    }

    /// Position of a label name.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Formats a mode index as `k` for a single label and `k@name` otherwise.
    pub fn format_mode(&self, m: ModeIndex) -> String {
        if self.len() == 1 {
            m.k.to_string()
        } else {
            format!("{}@{}", m.k, self.name(m.alpha))
        }
    }
}

/// A mode index `(k, α)` with `k ≥ 1` and `α` a label position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub k: u32,
    pub alpha: usize,
}

impl ModeIndex {
    /// Builds an index; panics when `k = 0`.
    pub fn new(k: u32, alpha: usize) -> Self {
        assert!(k >= 1, "mode index k must be positive");
        ModeIndex { k, alpha }
    }

    /// Flat position `(k - 1) * nram + α`.
    pub fn flat(self, nram: usize) -> usize {
        (self.k as usize - 1) * nram + self.alpha
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn from_flat(f: usize, nram: usize) -> Self {
        ModeIndex { k: (f / nram) as u32 + 1, alpha: f % nram }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.alpha)
    }
}

/// Mode number `k` of a flat index.
pub(crate) fn mode_of(f: usize, nram: usize) -> u32 {
    (f / nram) as u32 + 1
}
