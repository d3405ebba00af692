//! Arbitrary-precision counting primitives: binomials, multinomials,
//! integer partitions and partitions into parts of two kinds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::profile::WeightProfile;

/// Exact integer used for every count (orbit sizes, ball sizes, binomials).
pub type ExactInteger = BigInt;

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// `n` choose `k`; zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> ExactInteger {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Sum of `binom(n, j)` for `j >= k`.
pub fn binom_tail(n: u64, k: i64) -> ExactInteger {
    (k.max(0)..=n as i64).map(|j| binom(n, j)).sum()
}

fn factorial(n: u64) -> ExactInteger {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `m! / (μ_1! μ_2! ⋯)`. The parts must sum to `m`.
pub fn multinomial(m: u64, mu: &[u64]) -> Result<ExactInteger> {
    let sum: u64 = mu.iter().sum();
    if sum != m {
        return Err(invalid(format!(
            "multinomial parts sum to {sum}, expected {m}"
        )));
    }
    let denom = mu
        .iter()
        .fold(BigInt::one(), |acc, &part| acc * factorial(part));
    Ok(factorial(m) / denom)
}

/// Number of integer partitions of each `0..=n`.
pub fn partition_numbers(n: usize) -> Vec<ExactInteger> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for part in 1..=n {
        for total in part..=n {
            let prev = p[total - part].clone();
            p[total] += prev;
        }
    }
    p
}

/// Partition number `p(i)`, with `p(0) = 1`.
pub fn partition_number(i: usize) -> ExactInteger {
    partition_numbers(i).pop().expect("table is non-empty")
}

/// `|Λ(t)| = Σ_i p(i) p(t-i)`: partitions of `t` into parts of two kinds.
pub fn count_partition_pairs(t: usize) -> ExactInteger {
    let p = partition_numbers(t);
    (0..=t).map(|i| &p[i] * &p[t - i]).sum()
}

/// `N(t) = Σ_{r<=t} |Λ(r)|`, the bound on the number of orbits within
/// distance `t` of a fixed profile.
pub fn orbit_count_bound(t: usize) -> ExactInteger {
    (0..=t).map(count_partition_pairs).sum()
}

/// An integer partition: strictly positive, non-increasing parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(invalid("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("parts {parts:?} are not non-increasing")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// All partitions of `n`, largest parts first (lexicographically descending).
pub fn partitions(n: u32) -> Vec<Partition> {
    fn descend(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            descend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    descend(n, n, &mut Vec::new(), &mut out);
    out
}

/// A partition into parts of two kinds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionPair {
    pub lambda1: Partition,
    pub lambda2: Partition,
}

impl PartitionPair {
    pub fn total(&self) -> u64 {
        self.lambda1.total() + self.lambda2.total()
    }
}

/// Every element of `Λ(t)`.
pub fn partition_pairs(t: u32) -> Vec<PartitionPair> {
    let mut out = Vec::new();
    for first in 0..=t {
        for lambda1 in partitions(first) {
            for lambda2 in partitions(t - first) {
                out.push(PartitionPair {
                    lambda1: lambda1.clone(),
                    lambda2,
                });
            }
        }
    }
    out
}

/// Splits `u - v` into its positive excursions (`λ₁`) and its negated
/// negative excursions (`λ₂`).
///
/// When `u - v` is sign-sorted (positives, then zeros, then negatives) this
/// is the injection used to bound orbit counts, and [`phi_inverse`] recovers
/// `u`. For other inputs both partitions are still produced, but the
/// round trip is not guaranteed.
pub fn phi_map(u: &WeightProfile, v: &WeightProfile) -> Result<PartitionPair> {
    if u.subblocks() != v.subblocks() {
        return Err(invalid(format!(
            "profiles {u} and {v} have different lengths"
        )));
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (&a, &b) in u.weights().iter().zip(v.weights()) {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => pos.push(a - b),
            std::cmp::Ordering::Less => neg.push(b - a),
            std::cmp::Ordering::Equal => {}
        }
    }
    pos.sort_unstable_by(|a, b| b.cmp(a));
    neg.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PartitionPair {
        lambda1: Partition { parts: pos },
        lambda2: Partition { parts: neg },
    })
}

/// Pad-and-subtract reconstruction: `λ₁` padded with trailing zeros, minus
/// reversed `λ₂` padded with leading zeros, plus `v`. Returns `None` when the
/// result is not a valid profile.
pub fn phi_inverse(pair: &PartitionPair, v: &WeightProfile) -> Option<WeightProfile> {
    let m = v.subblocks();
    if pair.lambda1.len() > m || pair.lambda2.len() > m {
        return None;
    }
    let mut diff = vec![0i64; m];
    for (i, &p) in pair.lambda1.parts().iter().enumerate() {
        diff[i] += i64::from(p);
    }
    for (i, &p) in pair.lambda2.parts().iter().enumerate() {
        diff[m - 1 - i] -= i64::from(p);
    }
    let weights: Option<Vec<u32>> = v
        .weights()
        .iter()
        .zip(&diff)
        .map(|(&w, &d)| u32::try_from(i64::from(w) + d).ok())
        .collect();
    WeightProfile::new(weights?, v.subblock_len()).ok()
}

/// Number of length-`L` words of weight `u` at Hamming distance exactly `r`
/// from a fixed word of weight `w_ref`.
///
/// Such a word clears `a` of the reference's ones and sets `b` of its zeros,
/// with `a + b = r` and `b - a = u - w_ref`.
pub fn subblock_sphere_count(len: u32, w_ref: u32, u: u32, r: u32) -> ExactInteger {
    let shift = i64::from(u) - i64::from(w_ref);
    let r = i64::from(r);
    if r < shift.abs() || (r - shift.abs()) % 2 != 0 {
        return BigInt::zero();
    }
    let cleared = (r - shift) / 2;
    let set = (r + shift) / 2;
    binom(u64::from(w_ref), cleared) * binom(u64::from(len.saturating_sub(w_ref)), set)
}
