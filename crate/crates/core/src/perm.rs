//! Sparse permutations of basis states and their batch decomposition.
//!
//! A permutation is stored as the map of its non-fixed points only, so the
//! domain can be all of {0,1}^n for large n while storage stays linear in
//! the number of moved points. `size` counts moved points.
//!
//! The synthesis pipeline decomposes a permutation in three steps:
//!
//! 1. [`cycle_decompose`] into disjoint cycles,
//! 2. [`split_two_sets`] each cycle into two rounds of pairwise disjoint
//!    transpositions (the permutation is the second round composed with the
//!    first),
//! 3. [`partition_batches`] each round into power-of-two sized batches that
//!    [`crate::perm_synth::synth_batch`] turns into gates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A permutation of u64 basis points, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Permutation {
    map: BTreeMap<u64, u64>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// Builds from (point, image) pairs; fixed points may be included and
    /// are dropped. Fails unless the map is a bijection on its support.
    pub fn from_map(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, y) in pairs {
            if map.insert(x, y).is_some() {
                return Err(Error::NotBijective { point: x });
            }
        }
        map.retain(|k, v| k != v);
        let mut images: Vec<u64> = map.values().copied().collect();
        images.sort_unstable();
        for pair in images.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::NotBijective { point: pair[0] });
            }
        }
        for y in &images {
            if !map.contains_key(y) {
                return Err(Error::NotBijective { point: *y });
            }
        }
        Ok(Permutation { map })
    }

    /// Builds from cycles written as point lists: (x0, x1, ..) maps x0 to x1.
    pub fn from_cycles(cycles: &[Vec<u64>]) -> Result<Self> {
        let mut pairs = Vec::new();
        for cycle in cycles {
            if cycle.len() < 2 {
                continue;
            }
            for i in 0..cycle.len() {
                pairs.push((cycle[i], cycle[(i + 1) % cycle.len()]));
            }
        }
        Self::from_map(pairs)
    }

    pub fn transposition(a: u64, b: u64) -> Self {
        assert_ne!(a, b);
        Permutation { map: BTreeMap::from([(a, b), (b, a)]) }
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.map.get(&x).copied().unwrap_or(x)
    }

    /// Number of non-fixed points.
    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { map: self.map.iter().map(|(&k, &v)| (v, k)).collect() }
    }

    /// self after `inner`: returns x -> self(inner(x)).
    pub fn after(&self, inner: &Permutation) -> Permutation {
        let mut map = BTreeMap::new();
        for (&x, &y) in &inner.map {
            map.insert(x, self.apply(y));
        }
        for (&x, &y) in &self.map {
            map.entry(x).or_insert(y);
        }
        map.retain(|k, v| k != v);
        Permutation { map }
    }
}

/// Splits a permutation into disjoint cycles.
///
/// Each cycle is reported starting from its smallest point, and cycles are
/// ordered by that point. Fixed points produce no cycle.
pub fn cycle_decompose(sigma: &Permutation) -> Vec<Vec<u64>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut cycles = Vec::new();
    for start in sigma.support() {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut x = sigma.apply(start);
        while x != start {
            cycle.push(x);
            seen.insert(x);
            x = sigma.apply(x);
        }
        cycles.push(cycle);
    }
    cycles
}

/// A set of pairwise disjoint transpositions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TranspositionSet {
    pairs: Vec<(u64, u64)>,
}

impl TranspositionSet {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::NotDisjoint { point: a });
            }
            for p in [a, b] {
                if !seen.insert(p) {
                    return Err(Error::NotDisjoint { point: p });
                }
            }
        }
        Ok(TranspositionSet { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, a: u64, b: u64) -> Result<()> {
        let mut pairs = self.pairs.clone();
        pairs.push((a, b));
        *self = Self::new(pairs)?;
        Ok(())
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut map = BTreeMap::new();
        for &(a, b) in &self.pairs {
            map.insert(a, b);
            map.insert(b, a);
        }
        Permutation { map }
    }
}

/// Splits each cycle into two rounds of disjoint transpositions.
///
/// For a cycle (x0, .., x_{k-1}) the first round pairs x_i with x_{k-1-i}
/// and the second pairs x_i with x_{k-i}; composing second-after-first
/// reproduces the cycle. Returns (first, second); both rounds hold at most
/// floor(size/2) transpositions. A 2-cycle lands entirely in the first
/// round.
pub fn split_two_sets(sigma: &Permutation) -> (TranspositionSet, TranspositionSet) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for cycle in cycle_decompose(sigma) {
        let k = cycle.len();
        let mut i = 0;
        let mut j = k - 1;
        while i < j {
            first.push((cycle[i], cycle[j]));
            i += 1;
            j -= 1;
        }
        let mut i = 1;
        let mut j = k - 1;
        while i < j {
            second.push((cycle[i], cycle[j]));
            i += 1;
            j -= 1;
        }
    }
    let first = TranspositionSet::new(first).expect("cycle pairing is disjoint");
    let second = TranspositionSet::new(second).expect("cycle pairing is disjoint");
    debug_assert_eq!(
        &second.to_permutation().after(&first.to_permutation()),
        sigma,
        "two-round split must recompose"
    );
    (first, second)
}

/// Batches of one round, every batch a power-of-two transposition count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchPlan {
    pub batches: Vec<TranspositionSet>,
    pub m_cap: usize,
}

/// Greedily cuts a round into full batches of `m_cap` transpositions, then
/// covers the remainder with batches of decreasing powers of two.
pub fn partition_batches(set: &TranspositionSet, m_cap: usize) -> BatchPlan {
    assert!(m_cap >= 1 && m_cap.is_power_of_two(), "m_cap must be a power of two");
    let mut batches = Vec::new();
    let pairs = set.pairs();
    let mut at = 0;
    while pairs.len() - at >= m_cap {
        batches.push(TranspositionSet::new(pairs[at..at + m_cap].to_vec()).unwrap());
        at += m_cap;
    }
    let mut rest = pairs.len() - at;
    let mut take = m_cap;
    while rest > 0 {
        while take > rest {
            take /= 2;
        }
        batches.push(TranspositionSet::new(pairs[at..at + take].to_vec()).unwrap());
        at += take;
        rest -= take;
    }
    BatchPlan { batches, m_cap }
}

/// Largest power-of-two batch size m with 2m <= log2(n), floored at 1.
///
/// Batches of this size keep every expansion inside the batch circuit linear
/// in n; below n = 16 the cap degenerates to single-transposition batches.
pub fn batch_cap(n: usize) -> usize {
    let mut m = 1usize;
    while 2 * m * 2 <= usize::BITS as usize && n >= (1usize << (2 * m * 2)) {
        m *= 2;
    }
    m
}
