//! Orbits of the subblock automorphism group and the constrained ball sizes
//! that fill the reduced constraint matrix.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, multinomial, phi_map, subblock_sphere_count, ExactInteger};
use crate::error::{invalid, Error, Result};
use crate::profile::WeightProfile;

/// Which defining inequality an [`OrbitIndexSet`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    /// `P(m,L;w,t)`: profiles within L1 distance `t` of `[w,…,w]`.
    CsccBall,
    /// `P_row(m,L;w)`: every entry at least `w`.
    SeccRows,
    /// `P_col(m,L;w,t)`: union of the balls around every row profile.
    SeccCols,
}

/// An ordered, duplicate-free list of weight profiles.
#[derive(Debug, Clone)]
pub struct OrbitIndexSet {
    kind: OrbitKind,
    profiles: Vec<WeightProfile>,
    positions: HashMap<WeightProfile, usize>,
}

impl OrbitIndexSet {
    /// Builds an index set in the given order; later duplicates are dropped.
    pub fn from_profiles(kind: OrbitKind, profiles: Vec<WeightProfile>) -> Self {
        let mut positions = HashMap::with_capacity(profiles.len());
        let mut kept = Vec::with_capacity(profiles.len());
        for p in profiles {
            if !positions.contains_key(&p) {
                positions.insert(p.clone(), kept.len());
                kept.push(p);
            }
        }
        let profiles = kept;
        Self {
            kind,
            profiles,
            positions,
        }
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    pub fn profiles(&self) -> &[WeightProfile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn index_of(&self, profile: &WeightProfile) -> Option<usize> {
        self.positions.get(profile).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeightProfile> {
        self.profiles.iter()
    }
}

impl<'a> IntoIterator for &'a OrbitIndexSet {
    type Item = &'a WeightProfile;
    type IntoIter = std::slice::Iter<'a, WeightProfile>;

    fn into_iter(self) -> Self::IntoIter {
        self.profiles.iter()
    }
}

fn descending(a: &WeightProfile, b: &WeightProfile) -> Ordering {
    b.weights().cmp(a.weights())
}

/// All profiles `u` with `Σ |u_i - v_i| <= t`, in lexicographically
/// descending order.
pub fn profiles_near(v: &WeightProfile, t: u64) -> Vec<WeightProfile> {
    fn walk(
        v: &[u32],
        len: u32,
        upper: u32,
        budget: u64,
        prefix: &mut Vec<u32>,
        out: &mut Vec<WeightProfile>,
    ) {
        let i = prefix.len();
        if i == v.len() {
            out.push(WeightProfile::new(prefix.clone(), len).expect("sorted by construction"));
            return;
        }
        let lo = u64::from(v[i]).saturating_sub(budget) as u32;
        let hi = (u64::from(v[i]) + budget).min(u64::from(upper)) as u32;
        for w in (lo..=hi).rev() {
            prefix.push(w);
            walk(v, len, w, budget - u64::from(w.abs_diff(v[i])), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let len = v.subblock_len();
    walk(v.weights(), len, len, t, &mut Vec::new(), &mut out);
    out
}

/// All non-increasing `m`-tuples with entries in `[lo, L]`, lexicographically
/// descending.
fn profiles_between(m: usize, lo: u32, len: u32) -> Vec<WeightProfile> {
    fn walk(m: usize, lo: u32, len: u32, upper: u32, prefix: &mut Vec<u32>, out: &mut Vec<WeightProfile>) {
        if prefix.len() == m {
            out.push(WeightProfile::new(prefix.clone(), len).expect("sorted by construction"));
            return;
        }
        for w in (lo..=upper).rev() {
            prefix.push(w);
            walk(m, lo, len, w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= len {
        walk(m, lo, len, len, &mut Vec::new(), &mut out);
    }
    out
}

/// Every profile in `P(m,L)`.
pub fn all_profiles(m: usize, len: u32) -> Vec<WeightProfile> {
    profiles_between(m, 0, len)
}

/// Order used for `P(m,L;w,t)`: by distance from the centre, then positive
/// excursions before negative ones, larger parts first on the positive side
/// and smaller parts first on the negative side. Reproduces the listing
/// `[5,5,5],[6,5,5],[5,5,4],[7,5,5],[6,6,5],[6,5,4],[5,4,4],[5,5,3]`.
fn graded_order(center: &WeightProfile) -> impl Fn(&WeightProfile, &WeightProfile) -> Ordering + '_ {
    move |a, b| {
        let pa = phi_map(a, center).expect("same shape");
        let pb = phi_map(b, center).expect("same shape");
        pa.total()
            .cmp(&pb.total())
            .then_with(|| pb.lambda1.total().cmp(&pa.lambda1.total()))
            .then_with(|| pb.lambda1.parts().cmp(pa.lambda1.parts()))
            .then_with(|| pa.lambda2.parts().cmp(pb.lambda2.parts()))
    }
}

/// `P(m,L;w,t)`, the orbits inside the radius-`t` neighbourhood of the
/// constant-composition space.
pub fn enumerate_cscc_profiles(m: usize, len: u32, w: u32, t: u64) -> Result<OrbitIndexSet> {
    if m == 0 {
        return Err(invalid("need at least one subblock"));
    }
    if w > len {
        return Err(invalid(format!("subblock weight {w} exceeds length {len}")));
    }
    let center = WeightProfile::constant(m, w, len)?;
    let mut profiles = profiles_near(&center, t);
    profiles.sort_by(graded_order(&center));
    Ok(OrbitIndexSet::from_profiles(OrbitKind::CsccBall, profiles))
}

/// `P_row(m,L;w)`; empty when `w > L`.
pub fn enumerate_secc_rows(m: usize, len: u32, w: u32) -> OrbitIndexSet {
    OrbitIndexSet::from_profiles(OrbitKind::SeccRows, profiles_between(m, w, len))
}

/// `P_col(m,L;w,t)`: the row profiles first, then every other profile within
/// distance `t` of some row, each part lexicographically descending.
pub fn enumerate_secc_cols(m: usize, len: u32, w: u32, t: u64) -> OrbitIndexSet {
    let rows = profiles_between(m, w, len);
    let mut extra: Vec<WeightProfile> = rows
        .iter()
        .flat_map(|v| profiles_near(v, t))
        .filter(|u| u.weights().last().is_some_and(|&min| min < w))
        .collect();
    extra.sort_by(descending);
    extra.dedup();
    let mut profiles = rows;
    profiles.extend(extra);
    OrbitIndexSet::from_profiles(OrbitKind::SeccCols, profiles)
}

/// `|O_u| = m!/∏μ_j! · ∏ binom(L, u_i)`.
pub fn orbit_size(u: &WeightProfile) -> ExactInteger {
    let len = u64::from(u.subblock_len());
    let counts: Vec<u64> = u.weight_counts().into_iter().map(u64::from).collect();
    let arrangements =
        multinomial(u.subblocks() as u64, &counts).expect("weight counts sum to m");
    u.weights()
        .iter()
        .fold(arrangements, |acc, &w| acc * binom(len, i64::from(w)))
}

type Poly = Vec<BigInt>;

fn poly_mul(a: &[BigInt], b: &[BigInt], degree: usize) -> Poly {
    let mut out = vec![BigInt::zero(); degree + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(degree + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Distance-generating polynomials for placing weight-`b` subblocks against
/// weight-`a` subblocks, with cached powers.
struct SphereTables {
    len: u32,
    degree: usize,
    powers: HashMap<(u32, u32), Vec<Poly>>,
}

impl SphereTables {
    fn power(&mut self, a: u32, b: u32, n: usize) -> &Poly {
        let (len, degree) = (self.len, self.degree);
        let entry = self.powers.entry((a, b)).or_insert_with(|| {
            let mut unit = vec![BigInt::zero(); degree + 1];
            unit[0] = BigInt::one();
            vec![unit]
        });
        while entry.len() <= n {
            let base: Poly = (0..=degree)
                .map(|r| subblock_sphere_count(len, a, b, r as u32))
                .collect();
            let next = poly_mul(entry.last().expect("non-empty"), &base, degree);
            entry.push(next);
        }
        &entry[n]
    }
}

struct BallCounter<'a> {
    groups: Vec<(u32, usize)>,
    values: &'a [u32],
    t: u64,
    tables: SphereTables,
    memo: HashMap<(usize, Vec<usize>), Poly>,
}

impl BallCounter<'_> {
    fn solve(&mut self, group: usize, remaining: Vec<usize>) -> Poly {
        let degree = self.tables.degree;
        if group == self.groups.len() {
            let mut unit = vec![BigInt::zero(); degree + 1];
            if remaining.iter().all(|&c| c == 0) {
                unit[0] = BigInt::one();
            }
            return unit;
        }
        let key = (group, remaining);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (group_idx, remaining) = key;
        let (x_weight, size) = self.groups[group_idx];

        // Put the value equal to this group's weight last so it absorbs the
        // slack; off-diagonal choices are bounded by the distance budget.
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by_key(|&j| self.values[j] == x_weight);

        let mut splits = Vec::new();
        let mut current = vec![0usize; self.values.len()];
        self.distribute(&order, 0, size, 0, x_weight, &remaining, &mut current, &mut splits);

        let mut total = vec![BigInt::zero(); degree + 1];
        for split in splits {
            let mut poly = vec![BigInt::zero(); degree + 1];
            poly[0] = multinomial(size as u64, &split.iter().map(|&c| c as u64).collect::<Vec<_>>())
                .expect("split sums to group size");
            for (j, &count) in split.iter().enumerate() {
                if count > 0 {
                    let factor = self.tables.power(x_weight, self.values[j], count).clone();
                    poly = poly_mul(&poly, &factor, degree);
                }
            }
            let rest: Vec<usize> = remaining.iter().zip(&split).map(|(r, s)| r - s).collect();
            let tail = self.solve(group_idx + 1, rest);
            let combined = poly_mul(&poly, &tail, degree);
            for (acc, c) in total.iter_mut().zip(combined) {
                *acc += c;
            }
        }
        self.memo.insert((group_idx, remaining), total.clone());
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        order: &[usize],
        pos: usize,
        left: usize,
        min_dist: u64,
        x_weight: u32,
        remaining: &[usize],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == order.len() {
            if left == 0 {
                out.push(current.clone());
            }
            return;
        }
        let j = order[pos];
        let step = u64::from(self.values[j].abs_diff(x_weight));
        let mut cap = left.min(remaining[j]);
        if step > 0 {
            cap = cap.min(((self.t - min_dist) / step) as usize);
        }
        let choices: Vec<usize> = if pos + 1 == order.len() {
            if left <= cap { vec![left] } else { vec![] }
        } else {
            (0..=cap).collect()
        };
        for n in choices {
            current[j] = n;
            self.distribute(
                order,
                pos + 1,
                left - n,
                min_dist + step * n as u64,
                x_weight,
                remaining,
                current,
                out,
            );
        }
        current[j] = 0;
    }
}

/// Number of words of `O_u` within Hamming distance `t` of a fixed word of
/// `O_v`. This is the reduced-matrix entry `M*_{v,u}`.
///
/// The representative of `O_v` is irrelevant (the count is invariant under
/// the group); the computation distributes `u`'s weights over groups of
/// equal-weight subblocks of the representative, tracking a truncated
/// distance-generating polynomial.
pub fn constrained_ball_size(v: &WeightProfile, u: &WeightProfile, t: u64) -> Result<ExactInteger> {
    if !v.same_shape(u) {
        return Err(Error::Mismatch(format!(
            "profiles {v} (L={}) and {u} (L={}) differ in shape",
            v.subblock_len(),
            u.subblock_len()
        )));
    }
    let max_dist = u64::from(v.subblock_len()) * v.subblocks() as u64;
    let t = t.min(max_dist);
    if v.l1_distance(u) > t {
        return Ok(BigInt::zero());
    }
    let groups: Vec<(u32, usize)> = v
        .weight_counts()
        .into_iter()
        .enumerate()
        .rev()
        .filter(|&(_, c)| c > 0)
        .map(|(w, c)| (w as u32, c as usize))
        .collect();
    let counts = u.weight_counts();
    let values: Vec<u32> = (0..counts.len() as u32)
        .rev()
        .filter(|&w| counts[w as usize] > 0)
        .collect();
    let remaining: Vec<usize> = values.iter().map(|&w| counts[w as usize] as usize).collect();
    let mut counter = BallCounter {
        groups,
        values: &values,
        t,
        tables: SphereTables {
            len: v.subblock_len(),
            degree: t as usize,
            powers: HashMap::new(),
        },
        memo: HashMap::new(),
    };
    Ok(counter.solve(0, remaining).into_iter().sum())
}
