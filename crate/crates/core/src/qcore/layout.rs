use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Ordered list of subsystems with their local dimensions and labels.
///
/// Basis index of a product basis state is the row-major mixed-radix number
/// formed from the local digits, first subsystem most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if dims.is_empty() {
            return invalid("layout needs at least one subsystem");
        }
        if dims.len() != labels.len() {
            return invalid(format!("layout has {} dims but {} labels", dims.len(), labels.len()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return invalid(format!("local dimension {d} < 2"));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains('|') || l.contains(',') {
                return invalid(format!("bad subsystem label {l:?}"));
            }
            if !seen.insert(l.as_str()) {
                return invalid(format!("duplicate subsystem label {l:?}"));
            }
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| crate::Error::InvalidInput("total dimension overflows".into()))?;
        if total > 1 << 26 {
            return invalid(format!("total dimension {total} too large for dense states"));
        }
        Ok(Self { dims, labels })
    }

    /// Layout of `labels.len()` qubits.
    pub fn qubits<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let n = labels.len();
        Self::new(vec![2; n], labels)
    }

    /// Qubits labelled `q0, q1, ...`.
    pub fn numbered_qubits(n: usize) -> Result<Self> {
        Self::qubits((0..n).map(|i| format!("q{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Place values of each subsystem digit in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Local digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = index % self.dims[i];
            index /= self.dims[i];
        }
        out
    }

    pub fn flat_index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&d, &dim)| acc * dim + d)
    }

    /// Sub-layout on the given subsystem indices, kept in layout order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return invalid("cannot restrict to an empty subsystem set");
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.len()) {
            return invalid(format!("subsystem index {bad} out of range"));
        }
        Self::new(
            keep.iter().map(|&i| self.dims[i]).collect(),
            keep.iter().map(|&i| self.labels[i].clone()).collect(),
        )
    }

    /// Layout of `self ⊗ other`; labels must not collide.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return invalid(format!("label collision on {l:?}"));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Self::new(dims, labels)
    }
}

impl fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}[{d}]"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
