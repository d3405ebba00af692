//! Bitset branch-and-bound maximum clique with greedy-coloring bounds.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub(crate) fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn subtract(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[cfg(test)]
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Undirected graph as adjacency bitsets.
pub(crate) struct Graph {
    adj: Vec<Bitset>,
}

impl Graph {
    pub(crate) fn from_fn(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let mut adj = vec![Bitset::empty(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Self { adj }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.adj.len()
    }

    pub(crate) fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }
}

/// Shared state for one search, possibly split across threads.
pub(crate) struct Search<'g> {
    graph: &'g Graph,
    /// Largest clique size seen so far (or the target minus one).
    best: AtomicUsize,
    /// Stop as soon as `best` reaches this.
    target: usize,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
}

impl<'g> Search<'g> {
    pub(crate) fn new(graph: &'g Graph, floor: usize, target: usize, budget: u64) -> Self {
        Self {
            graph,
            best: AtomicUsize::new(floor),
            target,
            nodes: AtomicU64::new(0),
            budget,
            aborted: AtomicBool::new(false),
        }
    }

    pub(crate) fn best(&self) -> usize {
        self.best.load(Ordering::Relaxed)
    }

    pub(crate) fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    fn done(&self) -> bool {
        self.best() >= self.target || self.aborted()
    }

    /// Extends a clique of size `size` by vertices of `candidates`, all of
    /// which are adjacent to every clique vertex.
    pub(crate) fn expand(&self, size: usize, mut candidates: Bitset) {
        if self.done() {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        if candidates.is_empty() {
            self.best.fetch_max(size, Ordering::Relaxed);
            return;
        }
        let (order, colors) = self.color(&candidates);
        for i in (0..order.len()).rev() {
            if size + colors[i] <= self.best() || self.done() {
                return;
            }
            let v = order[i];
            let next = candidates.intersect(self.graph.neighbors(v));
            if next.is_empty() {
                self.best.fetch_max(size + 1, Ordering::Relaxed);
            } else {
                self.expand(size + 1, next);
            }
            candidates.remove(v);
        }
    }

    /// Greedy sequential coloring; vertices are returned in color order with
    /// the color index of each, so `colors` is non-decreasing.
    fn color(&self, candidates: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(candidates.len());
        let mut colors = Vec::with_capacity(candidates.len());
        let mut uncolored = candidates.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                class.subtract(self.graph.neighbors(v));
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

/// All vertices as a candidate set.
#[cfg(test)]
pub(crate) fn full_set(n: usize) -> Bitset {
    let mut s = Bitset::empty(n);
    for i in 0..n {
        s.insert(i);
    }
    s
}

/// Plain maximum clique size, for tests and small graphs.
#[cfg(test)]
pub(crate) fn max_clique(graph: &Graph) -> usize {
    let search = Search::new(graph, 0, usize::MAX, u64::MAX);
    search.expand(0, full_set(graph.len()));
    search.best()
}
