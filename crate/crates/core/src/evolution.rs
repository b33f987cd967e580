//! Genetic search over unimodal vectors whose self-product (variant A) or
//! pairs whose mutual product (variant B) is not unimodal.
//!
//! Each generation grows the population to `n_max` by mutation or crossover,
//! stops if any member has fitness zero, and otherwise culls back to `n_min`
//! by repeatedly dropping the member with the largest `phi * epsilon^age`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{fitness_with, is_unimodal, Phi4Mode};
use crate::error::{Error, Result};
use crate::exactpoly::BigRat;
use crate::transforms::{pi_product, HStarVector};

/// Rejection budget for a single crossover draw.
pub const CROSSOVER_ATTEMPTS: usize = 64;

/// Consecutive failed growth steps tolerated before a generation gives up
/// on reaching `n_max`.
const GROWTH_FAILURE_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Single vectors `h`, judged on the pair `(h, h)`.
    #[default]
    A,
    /// Ordered pairs `(h, g)`.
    B,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::parse(other, "variant must be A or B")),
        }
    }
}

/// How a mutation is drawn from the available outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MutationMode {
    /// Uniform over the distinct neighbor vectors.
    #[default]
    Distinct,
    /// Uniform over individual mutation operations, so a vector reachable
    /// by several operations is proportionally more likely.
    Multiset,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    /// Probability of mutation; crossover gets `1 - p_mu`.
    pub p_mu: f64,
    pub n_max: usize,
    pub n_min: usize,
    /// Age penalty base, strictly greater than one.
    pub epsilon: BigRat,
    pub t_max: u64,
    pub rng_seed: u64,
    pub variant: Variant,
    pub phi4_literal: bool,
    pub mutation_multiset: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            p_mu: 0.5,
            n_max: 30,
            n_min: 5,
            epsilon: BigRat::new(BigInt::from(21), BigInt::from(20)),
            t_max: 500,
            rng_seed: 0,
            variant: Variant::A,
            phi4_literal: false,
            mutation_multiset: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_mu) {
            return Err(Error::InvalidConfig(format!(
                "p_mu must lie in [0, 1], got {}",
                self.p_mu
            )));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= n_min <= n_max, got n_min={} n_max={}",
                self.n_min, self.n_max
            )));
        }
        if self.epsilon <= BigRat::one() {
            return Err(Error::InvalidConfig(format!(
                "epsilon must exceed 1, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn p_chi(&self) -> f64 {
        1.0 - self.p_mu
    }

    pub fn phi4_mode(&self) -> Phi4Mode {
        if self.phi4_literal {
            Phi4Mode::Literal
        } else {
            Phi4Mode::Corrected
        }
    }

    pub fn mutation_mode(&self) -> MutationMode {
        if self.mutation_multiset {
            MutationMode::Multiset
        } else {
            MutationMode::Distinct
        }
    }
}

/// Membership oracle with memoized product unimodality checks.
#[derive(Debug, Default)]
pub struct SearchSpace {
    product_unimodal: HashMap<(HStarVector, HStarVector), bool>,
}

impl SearchSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn product_is_unimodal(&mut self, h: &HStarVector, g: &HStarVector) -> bool {
        let key = if h <= g {
            (h.clone(), g.clone())
        } else {
            (g.clone(), h.clone())
        };
        if let Some(&hit) = self.product_unimodal.get(&key) {
            return hit;
        }
        let verdict = is_unimodal(&pi_product(&key.0, &key.1));
        self.product_unimodal.insert(key, verdict);
        verdict
    }

    /// Variant A: `h_0 = 1`, at least two entries, unimodal, and
    /// `pi(h, h)` not unimodal.
    pub fn contains(&mut self, h: &HStarVector) -> bool {
        h.len() >= 2 && has_factor_shape(h) && !self.product_is_unimodal(h, h)
    }

    /// Variant B: both start with 1, both unimodal, `pi(h, g)` not unimodal.
    pub fn contains_pair(&mut self, h: &HStarVector, g: &HStarVector) -> bool {
        has_factor_shape(h) && has_factor_shape(g) && !self.product_is_unimodal(h, g)
    }
}

fn has_factor_shape(h: &HStarVector) -> bool {
    h.get(0).is_one() && is_unimodal(h)
}

pub fn in_search_space(h: &HStarVector) -> bool {
    SearchSpace::new().contains(h)
}

pub fn in_search_space_pair(h: &HStarVector, g: &HStarVector) -> bool {
    SearchSpace::new().contains_pair(h, g)
}

/// Every single-step removal, insertion, decrement and increment of `h`,
/// in that order, before any membership filtering. Results that would be
/// empty or all zero are skipped.
pub fn raw_mutations(h: &HStarVector) -> Vec<HStarVector> {
    let a = h.entries();
    let n = a.len();
    let max = h.max_entry().clone();
    let mut out = Vec::new();
    let mut push = |v: Vec<BigInt>| {
        if let Ok(v) = HStarVector::new(v) {
            out.push(v);
        }
    };

    for i in 0..n {
        if n > 1 {
            let mut v = a.to_vec();
            v.remove(i);
            push(v);
        }
    }
    for i in 0..n {
        let mut value = BigInt::zero();
        while value <= max {
            let mut v = a.to_vec();
            v.insert(i + 1, value.clone());
            push(v);
            value += 1;
        }
    }
    for i in 0..n {
        if !a[i].is_zero() {
            let mut v = a.to_vec();
            v[i] -= 1;
            push(v);
        }
    }
    for i in 0..n {
        let mut v = a.to_vec();
        v[i] += 1;
        push(v);
    }
    out
}

/// A point of the search graph.
pub trait Genome: Clone + Ord + Hash + fmt::Debug + fmt::Display {
    const VARIANT: Variant;

    fn is_member(&self, space: &mut SearchSpace) -> bool;

    /// Results of all admissible mutations, one entry per operation.
    fn mutation_outcomes(&self, space: &mut SearchSpace) -> Vec<Self>;

    /// One unfiltered draw from the crossover box of two parents.
    fn crossover_candidate<R: Rng + ?Sized>(&self, other: &Self, rng: &mut R) -> Self;

    fn fitness(&self, mode: Phi4Mode) -> BigRat;
}

impl Genome for HStarVector {
    const VARIANT: Variant = Variant::A;

    fn is_member(&self, space: &mut SearchSpace) -> bool {
        space.contains(self)
    }

    fn mutation_outcomes(&self, space: &mut SearchSpace) -> Vec<Self> {
        raw_mutations(self)
            .into_iter()
            .filter(|m| space.contains(m))
            .collect()
    }

    fn crossover_candidate<R: Rng + ?Sized>(&self, other: &Self, rng: &mut R) -> Self {
        let (long, short) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let entries = long
            .entries()
            .iter()
            .enumerate()
            .map(|(i, x)| match short.entries().get(i) {
                Some(y) => sample_between(x, y, rng),
                None => x.clone(),
            })
            .collect();
        HStarVector::new(entries).unwrap_or_else(|_| long.clone())
    }

    fn fitness(&self, mode: Phi4Mode) -> BigRat {
        // search-space members have at least two entries
        fitness_with(self, mode)
            .map(|r| r.total)
            .expect("genome of length >= 2")
    }
}

fn sample_between<R: Rng + ?Sized>(x: &BigInt, y: &BigInt, rng: &mut R) -> BigInt {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == hi {
        return lo.clone();
    }
    let span = u64::try_from(hi - lo).expect("crossover box side fits in u64");
    lo + BigInt::from(rng.gen_range(0..=span))
}

/// Variant B genome.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HStarPair {
    pub first: HStarVector,
    pub second: HStarVector,
}

impl HStarPair {
    pub fn new(first: HStarVector, second: HStarVector) -> Self {
        Self { first, second }
    }
}

impl fmt::Display for HStarPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) x ({})", self.first, self.second)
    }
}

impl Genome for HStarPair {
    const VARIANT: Variant = Variant::B;

    fn is_member(&self, space: &mut SearchSpace) -> bool {
        space.contains_pair(&self.first, &self.second)
    }

    /// Moves one component at a time.
    fn mutation_outcomes(&self, space: &mut SearchSpace) -> Vec<Self> {
        let mut out = Vec::new();
        for m in raw_mutations(&self.first) {
            if space.contains_pair(&m, &self.second) {
                out.push(HStarPair::new(m, self.second.clone()));
            }
        }
        for m in raw_mutations(&self.second) {
            if space.contains_pair(&self.first, &m) {
                out.push(HStarPair::new(self.first.clone(), m));
            }
        }
        out
    }

    fn crossover_candidate<R: Rng + ?Sized>(&self, other: &Self, rng: &mut R) -> Self {
        let first = self.first.crossover_candidate(&other.first, rng);
        let second = self.second.crossover_candidate(&other.second, rng);
        HStarPair::new(first, second)
    }

    fn fitness(&self, mode: Phi4Mode) -> BigRat {
        self.first.fitness(mode) + self.second.fitness(mode)
    }
}

/// Distinct neighbors of `h` in the variant A search graph, sorted.
pub fn neighbors(h: &HStarVector) -> Vec<HStarVector> {
    distinct_neighbors(h, &mut SearchSpace::new())
}

pub fn distinct_neighbors<G: Genome>(g: &G, space: &mut SearchSpace) -> Vec<G> {
    let mut out = g.mutation_outcomes(space);
    out.sort();
    out.dedup();
    out
}

fn draw<G: Clone, R: Rng + ?Sized>(options: &[G], rng: &mut R) -> Result<G> {
    if options.is_empty() {
        return Err(Error::IsolatedIndividual);
    }
    Ok(options[rng.gen_range(0..options.len())].clone())
}

/// Uniform draw over the distinct neighbors of `h`.
pub fn mutate<R: Rng + ?Sized>(h: &HStarVector, rng: &mut R) -> Result<HStarVector> {
    draw(&neighbors(h), rng)
}

/// Uniform draw over search-space members of the box spanned by the two
/// parents, by rejection sampling.
pub fn crossover<G: Genome, R: Rng + ?Sized>(
    h: &G,
    g: &G,
    space: &mut SearchSpace,
    rng: &mut R,
) -> Result<G> {
    for _ in 0..CROSSOVER_ATTEMPTS {
        let child = h.crossover_candidate(g, rng);
        if child.is_member(space) {
            return Ok(child);
        }
    }
    Err(Error::CrossoverFailed {
        attempts: CROSSOVER_ATTEMPTS,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual<G> {
    pub genome: G,
    pub birth_generation: u64,
    fitness: BigRat,
}

impl<G: Genome> Individual<G> {
    pub fn new(genome: G, birth_generation: u64, mode: Phi4Mode) -> Self {
        let fitness = genome.fitness(mode);
        Self {
            genome,
            birth_generation,
            fitness,
        }
    }

    pub fn fitness(&self) -> &BigRat {
        &self.fitness
    }

    pub fn age(&self, generation: u64) -> u64 {
        generation.saturating_sub(self.birth_generation)
    }
}

/// A set of individuals: no genome appears twice, and a genome keeps the
/// birth generation of its first arrival.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population<G> {
    pub members: Vec<Individual<G>>,
    pub generation: u64,
}

impl<G: Genome> Population<G> {
    /// Generation-zero population. Repeated genomes are kept once.
    pub fn from_genomes(genomes: impl IntoIterator<Item = G>, mode: Phi4Mode) -> Self {
        let mut pop = Self {
            members: Vec::new(),
            generation: 0,
        };
        for g in genomes {
            if !pop.contains(&g) {
                pop.members.push(Individual::new(g, 0, mode));
            }
        }
        pop
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, genome: &G) -> bool {
        self.members.iter().any(|m| &m.genome == genome)
    }

    pub fn best_fitness(&self) -> Option<&BigRat> {
        self.members.iter().map(|m| &m.fitness).min()
    }

    pub fn mean_fitness(&self) -> Option<BigRat> {
        if self.members.is_empty() {
            return None;
        }
        let sum = self
            .members
            .iter()
            .fold(BigRat::zero(), |acc, m| acc + &m.fitness);
        Some(sum / BigRat::from_integer(BigInt::from(self.members.len())))
    }
}

/// Culls down to `n_min`, each time removing the member with the largest
/// `phi * epsilon^age`. Ties go to the older member, then to the
/// lexicographically larger genome.
pub fn select<G: Genome>(pop: &mut Population<G>, cfg: &GaConfig) {
    let generation = pop.generation;
    let max_age = pop
        .members
        .iter()
        .map(|m| m.age(generation))
        .max()
        .unwrap_or(0);
    let mut powers = Vec::with_capacity(max_age as usize + 1);
    let mut p = BigRat::one();
    for _ in 0..=max_age {
        powers.push(p.clone());
        p *= &cfg.epsilon;
    }
    let mut scores: Vec<BigRat> = pop
        .members
        .iter()
        .map(|m| &m.fitness * &powers[m.age(generation) as usize])
        .collect();

    while pop.members.len() > cfg.n_min {
        let worst = (0..pop.members.len())
            .max_by(|&i, &j| {
                let (a, b) = (&pop.members[i], &pop.members[j]);
                scores[i]
                    .cmp(&scores[j])
                    .then(a.age(generation).cmp(&b.age(generation)))
                    .then(a.genome.cmp(&b.genome))
            })
            .expect("population is nonempty");
        pop.members.remove(worst);
        scores.remove(worst);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub generation: u64,
    pub best_fitness: BigRat,
    pub mean_fitness: BigRat,
    pub population_size: usize,
}

/// Per-generation statistics, contiguous from generation 0. Rows after
/// generation 0 describe the population right after growth.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome<G> {
    /// Distinct fitness-zero genomes, sorted; empty if `t_max` ran out.
    pub solutions: Vec<G>,
    pub generation_found: Option<u64>,
    pub trace: RunTrace,
    pub population: Population<G>,
}

impl<G> RunOutcome<G> {
    pub fn converged(&self) -> bool {
        !self.solutions.is_empty()
    }
}

/// Evolution state for one run.
pub struct Engine<G: Genome> {
    cfg: GaConfig,
    rng: ChaCha8Rng,
    space: SearchSpace,
    neighbor_cache: HashMap<G, Arc<Vec<G>>>,
}

impl<G: Genome> Engine<G> {
    pub fn new(cfg: GaConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.variant != G::VARIANT {
            return Err(Error::InvalidConfig(format!(
                "configuration asks for variant {} but the genome is variant {}",
                cfg.variant,
                G::VARIANT
            )));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            cfg,
            space: SearchSpace::new(),
            neighbor_cache: HashMap::new(),
        })
    }

    pub fn config(&self) -> &GaConfig {
        &self.cfg
    }

    pub fn space_mut(&mut self) -> &mut SearchSpace {
        &mut self.space
    }

    fn outcomes(&mut self, g: &G) -> Arc<Vec<G>> {
        if let Some(hit) = self.neighbor_cache.get(g) {
            return Arc::clone(hit);
        }
        let mut out = g.mutation_outcomes(&mut self.space);
        if self.cfg.mutation_mode() == MutationMode::Distinct {
            out.sort();
            out.dedup();
        }
        let out = Arc::new(out);
        self.neighbor_cache.insert(g.clone(), Arc::clone(&out));
        out
    }

    pub fn mutate(&mut self, g: &G) -> Result<G> {
        let options = self.outcomes(g);
        draw(&options, &mut self.rng)
    }

    pub fn crossover(&mut self, a: &G, b: &G) -> Result<G> {
        crossover(a, b, &mut self.space, &mut self.rng)
    }

    /// Tries to add one individual born in `generation`. Returns `false`
    /// when the offspring is already a member.
    fn increase(&mut self, pop: &mut Population<G>, generation: u64) -> Result<bool> {
        let len = pop.members.len();
        let wants_mutation = self.rng.gen_bool(self.cfg.p_mu);
        let child = if wants_mutation || len < 2 {
            let i = self.rng.gen_range(0..len);
            let parent = pop.members[i].genome.clone();
            self.mutate(&parent)?
        } else {
            let i = self.rng.gen_range(0..len);
            let mut j = self.rng.gen_range(0..len - 1);
            if j >= i {
                j += 1;
            }
            let a = pop.members[i].genome.clone();
            let b = pop.members[j].genome.clone();
            match self.crossover(&a, &b) {
                Ok(c) => c,
                Err(Error::CrossoverFailed { .. }) => self.mutate(&a)?,
                Err(e) => return Err(e),
            }
        };
        assert!(
            child.is_member(&mut self.space),
            "offspring {child} left the search space"
        );
        if pop.contains(&child) {
            return Ok(false);
        }
        pop.members
            .push(Individual::new(child, generation, self.cfg.phi4_mode()));
        Ok(true)
    }

    fn grow(&mut self, pop: &mut Population<G>, generation: u64) {
        let mut failures = 0;
        while pop.members.len() < self.cfg.n_max && failures < GROWTH_FAILURE_LIMIT {
            match self.increase(pop, generation) {
                Ok(true) => failures = 0,
                Ok(false) | Err(_) => failures += 1,
            }
        }
    }

    pub fn run(&mut self, initial: Population<G>) -> Result<RunOutcome<G>> {
        if initial.is_empty() {
            return Err(Error::InvalidConfig("initial population is empty".into()));
        }
        if let Some(bad) = initial
            .members
            .iter()
            .find(|m| !m.genome.is_member(&mut self.space))
        {
            return Err(Error::InvalidConfig(format!(
                "initial member {} is not in the search space",
                bad.genome
            )));
        }

        let mut pop = initial;
        let mut trace = RunTrace::default();
        trace.rows.push(stats(&pop));

        for t in 1..=self.cfg.t_max {
            pop.generation = t;
            self.grow(&mut pop, t);
            trace.rows.push(stats(&pop));

            let mut solutions: Vec<G> = pop
                .members
                .iter()
                .filter(|m| m.fitness.is_zero())
                .map(|m| m.genome.clone())
                .collect();
            if !solutions.is_empty() {
                solutions.sort();
                solutions.dedup();
                return Ok(RunOutcome {
                    solutions,
                    generation_found: Some(t),
                    trace,
                    population: pop,
                });
            }
            select(&mut pop, &self.cfg);
        }

        Ok(RunOutcome {
            solutions: Vec::new(),
            generation_found: None,
            trace,
            population: pop,
        })
    }
}

fn stats<G: Genome>(pop: &Population<G>) -> TraceRow {
    TraceRow {
        generation: pop.generation,
        best_fitness: pop.best_fitness().cloned().unwrap_or_else(BigRat::zero),
        mean_fitness: pop.mean_fitness().unwrap_or_else(BigRat::zero),
        population_size: pop.len(),
    }
}

/// Runs the search from `initial` with the given configuration.
pub fn run_ga<G: Genome>(cfg: &GaConfig, initial: Population<G>) -> Result<RunOutcome<G>> {
    Engine::new(cfg.clone())?.run(initial)
}

/// `(1, 1, 1, 1, 1, 6)`, the usual starting individual.
pub fn default_seed_vector() -> HStarVector {
    HStarVector::from_u64s(&[1, 1, 1, 1, 1, 6]).expect("valid vector")
}

/// `((1, 1, 1, 1, 1, 6), (1, 1, 1, 1, 2, 5))`, the usual starting pair.
pub fn default_seed_pair() -> HStarPair {
    HStarPair::new(
        default_seed_vector(),
        HStarVector::from_u64s(&[1, 1, 1, 1, 2, 5]).expect("valid vector"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hv(v: &[u64]) -> HStarVector {
        HStarVector::from_u64s(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn membership_examples() {
        assert!(in_search_space(&hv(&[1, 1, 1, 1, 1, 6])));
        assert!(!in_search_space(&hv(&[1, 0])));
        assert!(!in_search_space(&hv(&[1])));
        // leading entry must be one
        assert!(!in_search_space(&hv(&[2, 2, 2, 2, 2, 12])));
    }

    #[test]
    fn pair_membership_examples() {
        let h = hv(&[1, 1, 1, 1, 1, 6]);
        let g = hv(&[1, 1, 1, 1, 2, 5]);
        assert!(in_search_space_pair(&h, &g));
        assert!(!in_search_space_pair(&hv(&[1, 0]), &hv(&[1, 0])));
        assert!(!in_search_space_pair(&h, &hv(&[1])));
    }

    #[test]
    fn neighbors_of_starting_vector() {
        let n = neighbors(&hv(&[1, 1, 1, 1, 1, 6]));
        let expected = vec![
            hv(&[1, 1, 1, 1, 1, 1, 6]),
            hv(&[1, 1, 1, 1, 1, 2, 6]),
            hv(&[1, 1, 1, 1, 1, 3, 6]),
            hv(&[1, 1, 1, 1, 1, 7]),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(n, expected);
        // dropping the spike leaves a vector with a unimodal self-product
        assert!(!in_search_space(&hv(&[1, 1, 1, 1, 1])));
    }

    #[test]
    fn multiset_outcomes_repeat_the_duplicate_insertion() {
        let mut space = SearchSpace::new();
        let outcomes = hv(&[1, 1, 1, 1, 1, 6]).mutation_outcomes(&mut space);
        let repeated = outcomes
            .iter()
            .filter(|v| **v == hv(&[1, 1, 1, 1, 1, 1, 6]))
            .count();
        assert_eq!(repeated, 5);
        assert_eq!(outcomes.len(), 8);
    }

    #[test]
    fn isolated_vectors_have_no_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // not in the space, and every single step keeps it out
        let h = hv(&[1, 0]);
        assert!(neighbors(&h).is_empty());
        assert!(matches!(
            mutate(&h, &mut rng),
            Err(Error::IsolatedIndividual)
        ));
    }

    #[test]
    fn mutation_is_uniform_over_distinct_neighbors() {
        let h = hv(&[1, 1, 1, 1, 1, 6]);
        let options = neighbors(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = HashMap::new();
        for _ in 0..4000 {
            let child = draw(&options, &mut rng).unwrap();
            *counts.entry(child).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 4);
        for (v, c) in counts {
            assert!((850..=1150).contains(&c), "{v}: {c}");
        }
    }

    #[test]
    fn mutation_replays_with_same_seed() {
        let h = hv(&[1, 1, 1, 1, 1, 6]);
        let a = mutate(&h, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = mutate(&h, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn crossover_examples() {
        let mut space = SearchSpace::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = hv(&[1, 1, 1, 1, 1, 6]);
        assert_eq!(crossover(&h, &h, &mut space, &mut rng).unwrap(), h);

        let g = hv(&[1, 1, 1, 1, 1, 7]);
        assert!(space.contains(&g));
        for _ in 0..50 {
            let c = crossover(&h, &g, &mut space, &mut rng).unwrap();
            assert!(c == h || c == g, "{c}");
        }
    }

    #[test]
    fn crossover_copies_tail_of_longer_parent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let long = hv(&[1, 1, 1, 1, 1, 2, 6, 4, 3]);
        let short = hv(&[1, 1, 1, 1, 1, 6]);
        for _ in 0..20 {
            let c = short.crossover_candidate(&long, &mut rng);
            assert_eq!(c.len(), long.len());
            assert_eq!(&c.entries()[6..], &long.entries()[6..]);
            for i in 0..6 {
                let (x, y) = (long.get(i), short.get(i));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                assert!(lo <= c.get(i) && c.get(i) <= hi);
            }
        }
    }

    fn individual(v: &[u64], birth: u64) -> Individual<HStarVector> {
        Individual::new(hv(v), birth, Phi4Mode::Corrected)
    }

    #[test]
    fn selection_removes_oldest_among_equals() {
        let cfg = GaConfig {
            n_min: 2,
            ..GaConfig::default()
        };
        let mut pop = Population {
            members: vec![
                individual(&[1, 1, 1, 1, 1, 6], 3),
                individual(&[1, 1, 1, 1, 1, 6], 0),
                individual(&[1, 1, 1, 1, 1, 6], 5),
            ],
            generation: 5,
        };
        select(&mut pop, &cfg);
        let births: Vec<u64> = pop.members.iter().map(|m| m.birth_generation).collect();
        assert_eq!(births, vec![3, 5]);
    }

    #[test]
    fn selection_removes_worse_fitness() {
        let cfg = GaConfig {
            n_min: 1,
            ..GaConfig::default()
        };
        let mut pop = Population {
            members: vec![
                individual(&[1, 1, 1, 1, 1, 6], 0),
                individual(&[1, 2, 1], 0),
            ],
            generation: 0,
        };
        assert_eq!(pop.members[0].fitness(), &rat(1, 1));
        assert_eq!(pop.members[1].fitness(), &rat(0, 1));
        select(&mut pop, &cfg);
        assert_eq!(pop.members[0].genome, hv(&[1, 2, 1]));
    }

    #[test]
    fn selection_breaks_full_ties_by_larger_genome() {
        let cfg = GaConfig {
            n_min: 1,
            ..GaConfig::default()
        };
        // both have fitness zero and the same age
        let mut pop = Population {
            members: vec![individual(&[1, 2, 1], 0), individual(&[1, 3, 1], 0)],
            generation: 2,
        };
        select(&mut pop, &cfg);
        assert_eq!(pop.members[0].genome, hv(&[1, 2, 1]));
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::default().validate().is_ok());
        let bad = [
            GaConfig {
                p_mu: 1.5,
                ..GaConfig::default()
            },
            GaConfig {
                n_min: 0,
                ..GaConfig::default()
            },
            GaConfig {
                n_min: 31,
                ..GaConfig::default()
            },
            GaConfig {
                epsilon: BigRat::one(),
                ..GaConfig::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        }
        assert!((GaConfig::default().p_chi() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let cfg = GaConfig {
            variant: Variant::B,
            ..GaConfig::default()
        };
        assert!(Engine::<HStarVector>::new(cfg).is_err());
    }

    #[test]
    fn zero_generations_returns_only_initial_row() {
        let cfg = GaConfig {
            t_max: 0,
            ..GaConfig::default()
        };
        let out = run_ga(
            &cfg,
            Population::from_genomes([default_seed_vector()], Phi4Mode::Corrected),
        )
        .unwrap();
        assert!(out.solutions.is_empty());
        assert_eq!(out.trace.rows.len(), 1);
        assert_eq!(out.trace.rows[0].generation, 0);
        assert_eq!(out.trace.rows[0].best_fitness, rat(1, 1));
    }

    #[test]
    fn initial_population_must_be_members() {
        let cfg = GaConfig::default();
        let pop = Population::from_genomes([hv(&[1, 0])], Phi4Mode::Corrected);
        assert!(run_ga(&cfg, pop).is_err());
        let empty = Population::<HStarVector>::from_genomes([], Phi4Mode::Corrected);
        assert!(run_ga(&cfg, empty).is_err());
    }

    #[test]
    fn short_run_keeps_population_bounds_and_membership() {
        let cfg = GaConfig {
            t_max: 5,
            n_max: 8,
            n_min: 3,
            rng_seed: 9,
            ..GaConfig::default()
        };
        let out = run_ga(
            &cfg,
            Population::from_genomes([default_seed_vector()], Phi4Mode::Corrected),
        )
        .unwrap();
        let rows = &out.trace.rows;
        assert_eq!(rows[0].population_size, 1);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.generation, i as u64);
            if i > 0 {
                assert_eq!(r.population_size, 8);
            }
        }
        if !out.converged() {
            assert_eq!(out.population.len(), 3);
        }
        let mut space = SearchSpace::new();
        assert!(out
            .population
            .members
            .iter()
            .all(|m| space.contains(&m.genome)));
    }

    #[test]
    fn pair_variant_runs_and_stays_in_space() {
        let cfg = GaConfig {
            t_max: 3,
            n_max: 6,
            n_min: 2,
            rng_seed: 1,
            variant: Variant::B,
            ..GaConfig::default()
        };
        let out = run_ga(
            &cfg,
            Population::from_genomes([default_seed_pair()], Phi4Mode::Corrected),
        )
        .unwrap();
        let mut space = SearchSpace::new();
        for m in &out.population.members {
            assert!(space.contains_pair(&m.genome.first, &m.genome.second));
        }
        assert_eq!(default_seed_pair().fitness(Phi4Mode::Corrected), rat(2, 1));
    }
}
