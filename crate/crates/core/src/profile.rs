use std::fmt;

use crate::error::{invalid, Result};

/// Sorted tuple of subblock weights. Indexes one orbit of the subblock
/// automorphism group (permute subblocks, then coordinates within each).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightProfile {
    weights: Vec<u32>,
    subblock_len: u32,
}

impl WeightProfile {
    /// Builds a profile from weights that are already non-increasing.
    pub fn new(weights: Vec<u32>, subblock_len: u32) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("a weight profile needs at least one subblock"));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("profile {weights:?} is not non-increasing")));
        }
        if weights[0] > subblock_len {
            return Err(invalid(format!(
                "weight {} exceeds subblock length {subblock_len}",
                weights[0]
            )));
        }
        Ok(Self {
            weights,
            subblock_len,
        })
    }

    /// Sorts arbitrary subblock weights into profile order.
    pub fn from_weights(mut weights: Vec<u32>, subblock_len: u32) -> Result<Self> {
        weights.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(weights, subblock_len)
    }

    /// `[w, w, ..., w]`.
    pub fn constant(m: usize, w: u32, subblock_len: u32) -> Result<Self> {
        Self::new(vec![w; m], subblock_len)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of subblocks `m`.
    pub fn subblocks(&self) -> usize {
        self.weights.len()
    }

    /// Subblock length `L`.
    pub fn subblock_len(&self) -> u32 {
        self.subblock_len
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    /// `Σ |u_i - v_i|` between two profiles of the same shape.
    pub fn l1_distance(&self, other: &Self) -> u64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(&a, &b)| u64::from(a.abs_diff(b)))
            .sum()
    }

    pub(crate) fn same_shape(&self, other: &Self) -> bool {
        self.subblock_len == other.subblock_len && self.weights.len() == other.weights.len()
    }

    /// Multiplicity of each weight value `0..=L`.
    pub fn weight_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.subblock_len as usize + 1];
        for &w in &self.weights {
            counts[w as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]")
    }
}
