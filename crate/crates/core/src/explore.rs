//! Breadth-first expansion of the solution subgraph and parametrized
//! searches over spike vectors `(1, 1..1, m, 0..0)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{fitness, is_unimodal};
use crate::error::{Error, Result};
use crate::evolution::{raw_mutations, SearchSpace};
use crate::transforms::{pi_product, HStarVector};

/// Deduplicated fitness-zero members of the variant A search space, in
/// discovery order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionSet {
    vectors: Vec<HStarVector>,
    seen: HashSet<HStarVector>,
}

impl SolutionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Verifies and inserts each vector; duplicates are skipped.
    pub fn from_vectors(vectors: impl IntoIterator<Item = HStarVector>) -> Result<Self> {
        let mut set = Self::new();
        let mut space = SearchSpace::new();
        for h in vectors {
            if !is_solution(&h, &mut space) {
                return Err(Error::InvalidParameter(format!(
                    "{h} is not a fitness-zero member of the search space"
                )));
            }
            set.insert_unchecked(h);
        }
        Ok(set)
    }

    fn insert_unchecked(&mut self, h: HStarVector) -> bool {
        if self.seen.contains(&h) {
            return false;
        }
        self.seen.insert(h.clone());
        self.vectors.push(h);
        true
    }

    pub fn vectors(&self) -> &[HStarVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<HStarVector> {
        self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, h: &HStarVector) -> bool {
        self.seen.contains(h)
    }

    /// Smallest number of leading ones and trailing zeros over the set.
    pub fn shape_bounds(&self) -> Option<(usize, usize)> {
        let leading = self.vectors.iter().map(leading_ones).min()?;
        let trailing = self.vectors.iter().map(trailing_zeros).min()?;
        Some((leading, trailing))
    }
}

fn leading_ones(h: &HStarVector) -> usize {
    h.entries()
        .iter()
        .take_while(|x| **x == BigInt::from(1))
        .count()
}

fn trailing_zeros(h: &HStarVector) -> usize {
    h.entries()
        .iter()
        .rev()
        .take_while(|x| **x == BigInt::from(0))
        .count()
}

fn is_solution(h: &HStarVector, space: &mut SearchSpace) -> bool {
    h.len() >= 2 && fitness(h).map(|r| r.is_solution()).unwrap_or(false) && space.contains(h)
}

/// Fitness-zero neighbors of `h`, sorted. Fitness is tested before the
/// more expensive product check; the result is the same as filtering the
/// full neighbor set.
fn solution_neighbors(h: &HStarVector) -> Vec<HStarVector> {
    let mut candidates: Vec<HStarVector> = raw_mutations(h)
        .into_iter()
        .filter(|m| m.len() >= 2 && fitness(m).map(|r| r.is_solution()).unwrap_or(false))
        .collect();
    candidates.sort();
    candidates.dedup();
    let mut space = SearchSpace::new();
    candidates.retain(|m| space.contains(m));
    candidates
}

/// Breadth-first closure of `seed` in the solution subgraph, stopping once
/// `limit` vectors are collected or the component is exhausted. Each level
/// is visited in lexicographic order.
pub fn expand_solutions(seed: &SolutionSet, limit: usize) -> SolutionSet {
    let mut out = seed.clone();
    let mut level: Vec<HStarVector> = seed.vectors.clone();
    level.sort();
    while out.len() < limit && !level.is_empty() {
        let found: Vec<Vec<HStarVector>> = level.par_iter().map(solution_neighbors).collect();
        let mut next: Vec<HStarVector> = found
            .into_iter()
            .flatten()
            .filter(|h| !out.contains(h))
            .collect();
        next.sort();
        next.dedup();
        for h in &next {
            if out.len() >= limit {
                break;
            }
            out.insert_unchecked(h.clone());
        }
        level = next;
    }
    out
}

/// `(1, ..., 1, m, 0, ..., 0)` of length `2k` with `m` at index `k`.
pub fn spike_vector(k: usize, m: u64) -> Result<HStarVector> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "spike needs k >= 2, got {k}"
        )));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("spike needs m >= 1".into()));
    }
    let mut v = vec![1u64; k];
    v.push(m);
    v.extend(std::iter::repeat_n(0, k - 1));
    HStarVector::from_u64s(&v)
}

/// Parameters of a spike vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spike {
    pub k: usize,
    pub m: u64,
}

impl Spike {
    pub fn vector(&self) -> HStarVector {
        spike_vector(self.k, self.m).expect("grid cells have k >= 2 and m >= 1")
    }
}

fn grid(k_min: usize, k_max: usize, m_max: u64) -> Vec<Spike> {
    (k_min.max(2)..=k_max)
        .flat_map(|k| (1..=m_max).map(move |m| Spike { k, m }))
        .collect()
}

fn spike_has_zero_fitness(s: &Spike) -> bool {
    let h = s.vector();
    is_unimodal(&h) && fitness(&h).map(|r| r.is_solution()).unwrap_or(false)
}

/// All spikes with `k <= k_max`, `m <= m_max` that are solutions: unimodal,
/// fitness zero, and with a non-unimodal self-product. Sorted by `(k, m)`.
pub fn grid_search_diagonal(k_max: usize, m_max: u64) -> Vec<Spike> {
    grid(2, k_max, m_max)
        .into_par_iter()
        .filter(|s| {
            spike_has_zero_fitness(s) && {
                let h = s.vector();
                !is_unimodal(&pi_product(&h, &h))
            }
        })
        .collect()
}

/// A pair of fitness-zero spikes whose product is not unimodal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpikePair {
    /// The factor with the larger `(k, m)`.
    pub first: Spike,
    pub second: Spike,
}

impl SpikePair {
    pub fn is_diagonal(&self) -> bool {
        self.first == self.second
    }

    /// Dimension of the product polytope, `(2k - 1) + (2k' - 1)`.
    pub fn dimension(&self) -> usize {
        2 * self.first.k - 1 + 2 * self.second.k - 1
    }
}

/// Unordered pairs of fitness-zero spikes with `k, k' <= k_max` and
/// `m, m' <= m_max` whose product is not unimodal, diagonal pairs
/// included. Sorted by `(first, second)`.
pub fn grid_search_pairs(k_max: usize, m_max: u64) -> Vec<SpikePair> {
    grid_search_pairs_in(2, k_max, m_max)
}

/// [`grid_search_pairs`] restricted to `k, k' >= k_min`.
pub fn grid_search_pairs_in(k_min: usize, k_max: usize, m_max: u64) -> Vec<SpikePair> {
    let spikes: Vec<Spike> = grid(k_min, k_max, m_max)
        .into_par_iter()
        .filter(spike_has_zero_fitness)
        .collect();
    let mut cells = Vec::new();
    for (i, a) in spikes.iter().enumerate() {
        for b in &spikes[..=i] {
            cells.push(SpikePair {
                first: *a,
                second: *b,
            });
        }
    }
    cells
        .into_par_iter()
        .filter(|p| !is_unimodal(&pi_product(&p.first.vector(), &p.second.vector())))
        .collect()
}
