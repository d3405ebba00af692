//! Brute-force ground truth at desk scale: the covering program over every
//! word, direct ball counts, and exhaustive maximum-code search.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::clique::{Bitset, Graph, Search};
use crate::combinatorics::{binom, ExactInteger, ExactRational};
use crate::error::{invalid, Error, Result};
use crate::lp::{solve_dense, verify_dense, LpSolution, ReducedLP, Verdict};
use crate::orbits::orbit_size;
use crate::profile::WeightProfile;

/// Environment variable overriding the desk-scale caps.
pub const DESK_ENV: &str = "SUBBLOCK_BOUNDS_MAX_DESK";

/// Largest word length any oracle handles, since words are `u64` masks.
const WORD_BITS: u32 = 64;
const BALL_CAP: usize = 1 << 20;
const CLIQUE_CAP: usize = 1 << 14;

/// The two constrained spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Every subblock has weight exactly `w`.
    Cscc,
    /// Every subblock has weight at least `w`.
    Secc,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cscc => "cscc",
            Family::Secc => "secc",
        }
    }

    fn admits(self, weight: u32, w: u32) -> bool {
        match self {
            Family::Cscc => weight == w,
            Family::Secc => weight >= w,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cscc" => Ok(Family::Cscc),
            "secc" => Ok(Family::Secc),
            _ => Err(invalid(format!("unknown code family {s:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Caps on the word length `mL` for the brute-force routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeskCaps {
    pub full_lp: u32,
    pub enumerate: u32,
}

impl Default for DeskCaps {
    fn default() -> Self {
        Self {
            full_lp: 14,
            enumerate: 24,
        }
    }
}

impl DeskCaps {
    /// Parses `"N"` (both caps) or `"LP,ENUM"`.
    pub fn parse(s: &str) -> Result<Self> {
        let num = |p: &str| {
            p.trim()
                .parse::<u32>()
                .ok()
                .filter(|&n| n <= WORD_BITS)
                .ok_or_else(|| invalid(format!("bad desk cap {p:?} in {DESK_ENV}")))
        };
        match s.split_once(',') {
            None => {
                let n = num(s)?;
                Ok(Self {
                    full_lp: n,
                    enumerate: n,
                })
            }
            Some((lp, en)) => Ok(Self {
                full_lp: num(lp)?,
                enumerate: num(en)?,
            }),
        }
    }

    /// Defaults, overridden by the environment variable when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DESK_ENV) {
            Ok(s) if !s.trim().is_empty() => Self::parse(&s),
            _ => Ok(Self::default()),
        }
    }
}

fn cap_check(what: &'static str, size: u32, cap: u32) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded {
            what,
            size: size as usize,
            cap: cap as usize,
        });
    }
    Ok(())
}

/// A binary word of `m` subblocks of length `len`. Bit `i*len + j` is
/// coordinate `j` of subblock `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    m: usize,
    len: u32,
}

impl Word {
    pub fn new(bits: u64, m: usize, len: u32) -> Result<Self> {
        let n = word_length(m, len)?;
        if n < WORD_BITS && bits >> n != 0 {
            return Err(invalid(format!("bits {bits:#x} do not fit in {n} coordinates")));
        }
        Ok(Self { bits, m, len })
    }

    /// Parses a `0`/`1` string, first subblock first. Spaces, dots and
    /// underscores are ignored.
    pub fn parse(s: &str, m: usize, len: u32) -> Result<Self> {
        let digits: Vec<char> = s.chars().filter(|c| !matches!(c, ' ' | '.' | '_' | '·')).collect();
        let n = word_length(m, len)?;
        if digits.len() != n as usize {
            return Err(invalid(format!("word {s:?} has {} bits, expected {n}", digits.len())));
        }
        let mut bits = 0u64;
        for (i, c) in digits.into_iter().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(invalid(format!("bad character {c:?} in word"))),
            }
        }
        Self::new(bits, m, len)
    }

    /// The word with subblock `i` equal to `1^{w_i} 0^{L-w_i}`.
    pub fn representative(u: &WeightProfile) -> Result<Self> {
        let len = u.subblock_len();
        let mut bits = 0u64;
        for (i, &w) in u.weights().iter().enumerate() {
            bits |= low_mask(w) << (i as u32 * len);
        }
        Self::new(bits, u.subblocks(), len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn subblocks(&self) -> usize {
        self.m
    }

    pub fn subblock_len(&self) -> u32 {
        self.len
    }

    pub fn subblock(&self, i: usize) -> u64 {
        (self.bits >> (i as u32 * self.len)) & low_mask(self.len)
    }

    pub fn subblock_weights(&self) -> Vec<u32> {
        (0..self.m).map(|i| self.subblock(i).count_ones()).collect()
    }

    pub fn profile(&self) -> WeightProfile {
        WeightProfile::from_weights(self.subblock_weights(), self.len).expect("weights fit")
    }

    pub fn distance(&self, other: &Word) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m as u32 * self.len {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn word_length(m: usize, len: u32) -> Result<u32> {
    if m == 0 || len == 0 {
        return Err(invalid("need at least one subblock of positive length"));
    }
    match u32::try_from(m).ok().and_then(|m| m.checked_mul(len)) {
        Some(n) if n <= WORD_BITS => Ok(n),
        _ => Err(invalid(format!("word length {m}x{len} exceeds {WORD_BITS} bits"))),
    }
}

fn low_mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// All words of length `len` with weight `k`, ascending.
fn fixed_weight(len: u32, k: u32) -> Vec<u64> {
    (0..1u64 << len).filter(|x| x.count_ones() == k).collect()
}

/// Every word of the constrained space, in increasing numeric order.
pub fn enumerate_space(family: Family, m: usize, len: u32, w: u32) -> Result<Vec<Word>> {
    enumerate_space_capped(family, m, len, w, DeskCaps::from_env()?.enumerate)
}

fn enumerate_space_capped(family: Family, m: usize, len: u32, w: u32, cap: u32) -> Result<Vec<Word>> {
    let n = word_length(m, len)?;
    cap_check("word length for enumeration", n, cap)?;
    if w > len {
        return Err(invalid(format!("weight {w} exceeds subblock length {len}")));
    }
    let block: Vec<u64> = (0..=len)
        .filter(|&k| family.admits(k, w))
        .flat_map(|k| fixed_weight(len, k))
        .collect();
    let mut words = vec![0u64];
    for i in 0..m {
        let shift = i as u32 * len;
        words = words
            .iter()
            .flat_map(|&x| block.iter().map(move |&b| x | b << shift))
            .collect();
    }
    words.sort_unstable();
    Ok(words.into_iter().map(|bits| Word { bits, m, len }).collect())
}

/// All error patterns of weight at most `t` on `n` coordinates, by weight
/// and then in increasing order within each weight.
fn error_patterns(n: u32, t: u32) -> Vec<u64> {
    let mut out = vec![0u64];
    for k in 1..=t.min(n) {
        // Gosper's hack over k-subsets of n bits.
        let mut x: u128 = (1 << k) - 1;
        while x >> n == 0 {
            out.push(x as u64);
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    out
}

/// The covering program over every word: rows are the words of `S`,
/// columns the words of `T`, the union of radius-`t` balls around `S`.
#[derive(Debug, Clone)]
pub struct FullLP {
    pub family: Family,
    pub t: u32,
    pub rows: Vec<Word>,
    pub cols: Vec<Word>,
    /// `matrix[x][y] = 1` iff `d(rows[x], cols[y]) <= t`.
    pub matrix: Vec<Vec<bool>>,
}

impl FullLP {
    fn dense(&self) -> (Vec<Vec<ExactInteger>>, Vec<ExactInteger>) {
        let one = BigInt::from(1);
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|&b| if b { one.clone() } else { BigInt::from(0) }).collect())
            .collect();
        (matrix, vec![one; self.cols.len()])
    }

    /// Minimises the number of covering words, exactly.
    pub fn solve(&self) -> Result<LpSolution> {
        let (matrix, objective) = self.dense();
        solve_dense(&matrix, &objective)
    }

    /// Checks a per-word primal (over `cols`) and dual (over `rows`).
    pub fn verify(&self, primal: &[ExactRational], dual: &[ExactRational]) -> Result<Verdict> {
        let (matrix, objective) = self.dense();
        verify_dense(&matrix, &objective, primal, dual)
    }

    /// Spreads an orbit-level solution of the reduced program over words:
    /// each column word takes its orbit's primal value, each row word an
    /// equal share `X_v / |O_v|` of its orbit's dual value. Words whose orbit
    /// the reduced program does not list get zero.
    pub fn lift(&self, lp: &ReducedLP, sol: &LpSolution) -> (Vec<ExactRational>, Vec<ExactRational>) {
        let zero = BigRational::zero();
        let primal = self
            .cols
            .iter()
            .map(|y| lp.cols().index_of(&y.profile()).map_or(zero.clone(), |j| sol.primal[j].clone()))
            .collect();
        let dual = self
            .rows
            .iter()
            .map(|x| {
                let v = x.profile();
                lp.rows().index_of(&v).map_or(zero.clone(), |i| {
                    &sol.dual[i] / BigRational::from_integer(orbit_size(&v))
                })
            })
            .collect();
        (primal, dual)
    }
}

pub fn full_lp(family: Family, m: usize, len: u32, w: u32, t: u32) -> Result<FullLP> {
    let caps = DeskCaps::from_env()?;
    let n = word_length(m, len)?;
    cap_check("word length for the full program", n, caps.full_lp)?;
    let rows = enumerate_space_capped(family, m, len, w, caps.enumerate)?;
    let patterns = error_patterns(n, t);
    let mut union: HashSet<u64> = HashSet::new();
    for x in &rows {
        union.extend(patterns.iter().map(|e| x.bits ^ e));
    }
    let mut cols: Vec<u64> = union.into_iter().collect();
    cols.sort_unstable();
    let cols: Vec<Word> = cols.into_iter().map(|bits| Word { bits, m, len }).collect();
    let matrix = rows
        .iter()
        .map(|x| cols.iter().map(|y| x.distance(y) <= t).collect())
        .collect();
    Ok(FullLP {
        family,
        t,
        rows,
        cols,
        matrix,
    })
}

/// Number of words of orbit `u` within distance `t` of `x`, by flipping
/// every set of at most `t` coordinates of `x`.
pub fn exhaustive_ball_size(x: &Word, u: &WeightProfile, t: u64) -> Result<ExactInteger> {
    if u.subblocks() != x.m || u.subblock_len() != x.len {
        return Err(Error::Mismatch(format!("profile {u} does not fit a {}x{} word", x.m, x.len)));
    }
    let n = x.m as u32 * x.len;
    let t = t.min(u64::from(n)) as u32;
    let volume: BigInt = (0..=t).map(|j| binom(u64::from(n), i64::from(j))).sum();
    let volume = usize::try_from(volume).unwrap_or(usize::MAX);
    if volume > BALL_CAP {
        return Err(Error::CapExceeded {
            what: "ball volume for counting",
            size: volume,
            cap: BALL_CAP,
        });
    }
    let target = u.weights();
    let count = error_patterns(n, t)
        .into_iter()
        .filter(|e| {
            let y = Word { bits: x.bits ^ e, m: x.m, len: x.len };
            let mut ws = y.subblock_weights();
            ws.sort_unstable_by(|a, b| b.cmp(a));
            ws == target
        })
        .count();
    Ok(BigInt::from(count))
}

/// Outcome of a budgeted clique search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeSearch {
    /// The search finished; the value is exact.
    Done(u64),
    /// The node budget ran out; the value is the best code found so far.
    Unfinished(u64),
}

struct CodeGraph {
    words: Vec<Word>,
    graph: Graph,
}

fn code_graph(family: Family, m: usize, len: u32, w: u32, d: u64) -> Result<CodeGraph> {
    if d == 0 {
        return Err(invalid("minimum distance must be at least 1"));
    }
    let words = enumerate_space(family, m, len, w)?;
    if words.len() > CLIQUE_CAP {
        return Err(Error::CapExceeded {
            what: "space size for clique search",
            size: words.len(),
            cap: CLIQUE_CAP,
        });
    }
    let graph = Graph::from_fn(words.len(), |i, j| u64::from(words[i].distance(&words[j])) >= d);
    Ok(CodeGraph { words, graph })
}

/// Runs the clique search split over orbit representatives.
///
/// Every code can be moved by a group element so that its word from the
/// earliest orbit (in the fixed orbit order) is that orbit's representative.
/// Branch `k` therefore fixes representative `k` and only admits words from
/// orbit `k` onward.
fn run_search(cg: &CodeGraph, search: &Search<'_>) {
    let mut orbits: Vec<WeightProfile> = cg.words.iter().map(Word::profile).collect();
    orbits.sort();
    orbits.dedup();
    let orbit_of: Vec<usize> = cg
        .words
        .iter()
        .map(|x| orbits.binary_search(&x.profile()).expect("listed"))
        .collect();
    let roots: Vec<(usize, usize)> = orbits
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let rep = Word::representative(u).expect("profile fits");
            let v = cg.words.binary_search(&rep).expect("representative is in the space");
            (k, v)
        })
        .collect();
    roots.par_iter().for_each(|&(k, v)| {
        let mut cand = Bitset::empty(cg.words.len());
        for j in 0..cg.words.len() {
            if orbit_of[j] >= k && cg.graph.neighbors(v).contains(j) {
                cand.insert(j);
            }
        }
        search.expand(1, cand);
    });
}

/// Maximum size of a code with minimum distance `d` in the space, with an
/// explicit node budget.
pub fn exhaustive_code_size_budgeted(
    family: Family,
    m: usize,
    len: u32,
    w: u32,
    d: u64,
    budget: u64,
) -> Result<CodeSearch> {
    let cg = code_graph(family, m, len, w, d)?;
    if cg.words.is_empty() {
        return Ok(CodeSearch::Done(0));
    }
    let search = Search::new(&cg.graph, 1, usize::MAX, budget);
    run_search(&cg, &search);
    let best = search.best() as u64;
    Ok(if search.aborted() {
        CodeSearch::Unfinished(best)
    } else {
        CodeSearch::Done(best)
    })
}

/// Exact maximum code size `A(n,d;S)`.
pub fn exhaustive_code_size(family: Family, m: usize, len: u32, w: u32, d: u64) -> Result<u64> {
    match exhaustive_code_size_budgeted(family, m, len, w, d, u64::MAX)? {
        CodeSearch::Done(n) | CodeSearch::Unfinished(n) => Ok(n),
    }
}

/// Decides exhaustively whether a code of size `k` exists. `None` means the
/// node budget ran out first.
pub fn code_of_size_exists(
    family: Family,
    m: usize,
    len: u32,
    w: u32,
    d: u64,
    k: u64,
    budget: u64,
) -> Result<Option<bool>> {
    let cg = code_graph(family, m, len, w, d)?;
    let k = usize::try_from(k).unwrap_or(usize::MAX);
    if k <= 1 {
        return Ok(Some(k == 0 || !cg.words.is_empty()));
    }
    let search = Search::new(&cg.graph, k - 1, k, budget);
    run_search(&cg, &search);
    Ok(if search.best() >= k {
        Some(true)
    } else if search.aborted() {
        None
    } else {
        Some(false)
    })
}
