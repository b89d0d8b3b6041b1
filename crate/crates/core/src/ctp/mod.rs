//! Connecting tree search.
//!
//! Given m seed sets, a result is a minimal tree of the graph (edges taken in
//! either direction) that contains exactly one node of each set and whose
//! leaves are all seeds. Eight algorithms are provided:
//!
//! * `bft`, `bft_m`, `bft_am`: breadth-first growth of unrooted trees from any
//!   of their nodes, optionally merging trees that share a node. Complete but
//!   expensive; `bft` serves as the reference oracle.
//! * `gam`: grow rooted trees from their root and aggressively merge trees
//!   with the same root.
//! * `esp`, `lesp`: `gam` plus pruning of trees whose edge set was already
//!   built under another root; `lesp` spares some merges at well-connected
//!   nodes.
//! * `moesp`, `molesp`: the above plus re-rooted copies at seed nodes that
//!   can be merged but not grown.

mod bft;
mod check;
mod classify;
mod gam;
mod queue;
mod score;
mod tree;

pub use check::{check_result, directed_root, is_tree, minimize, ResultViolation};
pub use classify::{classify_result, Classification, Piece};
pub use gam::SearchState;
pub use score::{apply_score_topk, BatchScoreFunction, ScoreFunction, ScoreRegistry};
pub use tree::{EdgeSet, Provenance, RootedTree, TreeId};

use crate::eql::ast::CtpFilters;
use crate::graph::{EdgeId, Graph, NodeId};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSet {
    /// Every node of the graph.
    Universal,
    Nodes(BTreeSet<NodeId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSets {
    sets: Vec<SeedSet>,
}

impl SeedSets {
    pub fn new(sets: Vec<SeedSet>) -> Self {
        SeedSets { sets }
    }

    /// Non-universal sets from raw node ids.
    pub fn of_ids<I, J>(sets: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = u64>,
    {
        SeedSets::new(
            sets.into_iter()
                .map(|s| SeedSet::Nodes(s.into_iter().map(NodeId).collect()))
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[SeedSet] {
        &self.sets
    }

    pub fn is_universal(&self, i: usize) -> bool {
        matches!(self.sets[i], SeedSet::Universal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bft,
    BftM,
    BftAm,
    Gam,
    Esp,
    MoEsp,
    Lesp,
    MoLesp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Bft,
        Algorithm::BftM,
        Algorithm::BftAm,
        Algorithm::Gam,
        Algorithm::Esp,
        Algorithm::MoEsp,
        Algorithm::Lesp,
        Algorithm::MoLesp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bft => "bft",
            Algorithm::BftM => "bft_m",
            Algorithm::BftAm => "bft_am",
            Algorithm::Gam => "gam",
            Algorithm::Esp => "esp",
            Algorithm::MoEsp => "moesp",
            Algorithm::Lesp => "lesp",
            Algorithm::MoLesp => "molesp",
        }
    }

    pub fn is_bft(self) -> bool {
        matches!(self, Algorithm::Bft | Algorithm::BftM | Algorithm::BftAm)
    }

    pub(crate) fn prunes_edge_sets(self) -> bool {
        matches!(
            self,
            Algorithm::Esp | Algorithm::MoEsp | Algorithm::Lesp | Algorithm::MoLesp
        )
    }

    pub(crate) fn spares_merges(self) -> bool {
        matches!(self, Algorithm::Lesp | Algorithm::MoLesp)
    }

    pub(crate) fn makes_mo_copies(self) -> bool {
        matches!(self, Algorithm::MoEsp | Algorithm::MoLesp)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}`; expected one of bft, bft_m, bft_am, gam, esp, moesp, lesp, molesp")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

/// Order in which (tree, edge) pairs leave the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorityPolicy {
    /// Fewest edges first; ties by edge-set key, then root.
    #[default]
    SmallestFirst,
    /// A pseudo-random but reproducible order derived from the seed. Used to
    /// exercise order independence.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiQueue {
    /// On when the largest seed set is at least ten times the smallest.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub filters: CtpFilters,
    pub priority: PriorityPolicy,
    pub multi_queue: MultiQueue,
    /// Used when the filters carry no TIMEOUT.
    pub timeout_ms: Option<u64>,
    /// Stop after building this many provenances; flags the outcome.
    pub budget: Option<u64>,
}

impl SearchConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        SearchConfig {
            algorithm,
            filters: CtpFilters::default(),
            priority: PriorityPolicy::default(),
            multi_queue: MultiQueue::default(),
            timeout_ms: None,
            budget: None,
        }
    }

    pub fn with_filters(mut self, filters: CtpFilters) -> Self {
        self.filters = filters;
        self
    }

    pub(crate) fn deadline(&self, start: Instant) -> Option<Instant> {
        self.filters
            .timeout_ms
            .or(self.timeout_ms)
            .map(|ms| start + Duration::from_millis(ms))
    }
}

/// A reported connecting tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTree {
    /// Ascending edge ids.
    pub edges: Vec<EdgeId>,
    /// Ascending node ids.
    pub nodes: Vec<NodeId>,
    /// One node per seed set, in set order. For a universal set this is the
    /// smallest node id of the tree.
    pub seeds: Vec<NodeId>,
    /// The node reaching every other one by directed paths; only set for
    /// searches with the UNI filter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
}

impl ResultTree {
    /// Identity of a result: its edges, or its single node when it has none.
    pub fn key(&self) -> (Vec<EdgeId>, Option<NodeId>) {
        if self.edges.is_empty() {
            (Vec::new(), self.nodes.first().copied())
        } else {
            (self.edges.clone(), None)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub provenances_built: u64,
    pub trees_pruned: u64,
    pub results_found: u64,
    pub queue_pops: u64,
    pub timed_out: bool,
    pub budget_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub results: Vec<ResultTree>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn partial(&self) -> bool {
        self.stats.timed_out || self.stats.budget_exhausted
    }

    /// Result identities as a set, for comparing algorithms.
    pub fn keys(&self) -> BTreeSet<(Vec<EdgeId>, Option<NodeId>)> {
        self.results.iter().map(ResultTree::key).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no seed sets given")]
    NoSeedSets,
    #[error("at most 64 seed sets are supported, got {0}")]
    TooManySeedSets(usize),
    #[error("every seed set is universal")]
    AllUniversal,
    #[error("seed set #{0} is empty")]
    EmptySeedSet(usize),
    #[error("seed node {0} is not in the graph")]
    UnknownSeed(NodeId),
    #[error("edges do not form a tree")]
    NotATree,
    #[error("tree is not a valid result: {0}")]
    NotAResult(String),
    #[error("unknown score function `{0}`")]
    UnknownScore(String),
}

/// Seed sets compiled against a graph: one bitmask per node.
#[derive(Debug, Clone)]
pub(crate) struct SeedIndex {
    pub mask: Vec<u64>,
    /// Bits of the non-universal sets; a tree is complete when its sat covers it.
    pub full: u64,
    pub universal: Vec<bool>,
    /// Distinct seed nodes, ascending.
    pub seeds: Vec<u32>,
    pub set_sizes: Vec<usize>,
}

impl SeedIndex {
    pub fn build(g: &Graph, seeds: &SeedSets) -> Result<SeedIndex, SearchError> {
        let m = seeds.m();
        if m == 0 {
            return Err(SearchError::NoSeedSets);
        }
        if m > 64 {
            return Err(SearchError::TooManySeedSets(m));
        }
        let mut mask = vec![0u64; g.node_count()];
        let mut full = 0;
        let mut universal = Vec::with_capacity(m);
        let mut set_sizes = Vec::with_capacity(m);
        for (i, s) in seeds.sets().iter().enumerate() {
            match s {
                SeedSet::Universal => {
                    universal.push(true);
                    set_sizes.push(g.node_count());
                }
                SeedSet::Nodes(nodes) => {
                    if nodes.is_empty() {
                        return Err(SearchError::EmptySeedSet(i));
                    }
                    for &n in nodes {
                        let ix = g.node_ix(n).ok_or(SearchError::UnknownSeed(n))?;
                        mask[ix as usize] |= 1 << i;
                    }
                    full |= 1 << i;
                    universal.push(false);
                    set_sizes.push(nodes.len());
                }
            }
        }
        if full == 0 {
            return Err(SearchError::AllUniversal);
        }
        let seeds = (0..g.node_count() as u32)
            .filter(|&n| mask[n as usize] != 0)
            .collect();
        Ok(SeedIndex {
            mask,
            full,
            universal,
            seeds,
            set_sizes,
        })
    }

    pub fn mask_of(&self, n: u32) -> u64 {
        self.mask[n as usize]
    }

    pub fn is_seed(&self, n: u32) -> bool {
        self.mask[n as usize] != 0
    }

    pub fn wants_multi_queue(&self, mode: MultiQueue) -> bool {
        match mode {
            MultiQueue::On => true,
            MultiQueue::Off => false,
            MultiQueue::Auto => {
                let sizes: Vec<usize> = self
                    .set_sizes
                    .iter()
                    .zip(&self.universal)
                    .filter(|(_, &u)| !u)
                    .map(|(&s, _)| s)
                    .collect();
                let max = sizes.iter().copied().max().unwrap_or(1);
                let min = sizes.iter().copied().min().unwrap_or(1).max(1);
                max >= 10 * min
            }
        }
    }

    /// Converts a dense-index tree into a reported result.
    pub fn report(&self, g: &Graph, edges: &[u32], nodes: &[u32], root: Option<u32>) -> ResultTree {
        let node_ids: Vec<NodeId> = nodes.iter().map(|&n| g.node_at(n).id).collect();
        let smallest = node_ids.iter().copied().min().expect("tree has a node");
        let seeds = (0..self.universal.len())
            .map(|i| {
                if self.universal[i] {
                    smallest
                } else {
                    let n = nodes
                        .iter()
                        .copied()
                        .find(|&n| self.mask[n as usize] & (1 << i) != 0)
                        .expect("complete tree holds a seed of every set");
                    g.node_at(n).id
                }
            })
            .collect();
        let mut node_ids = node_ids;
        node_ids.sort_unstable();
        ResultTree {
            edges: edges.iter().map(|&e| g.edge_at(e).id).collect(),
            nodes: node_ids,
            seeds,
            root: root.map(|r| g.node_at(r).id),
            score: None,
        }
    }
}

/// Per-edge label admission for the LABEL filter.
pub(crate) fn allowed_edges(g: &Graph, filters: &CtpFilters) -> Option<Vec<bool>> {
    filters
        .labels
        .as_ref()
        .map(|ls| g.edges().iter().map(|e| ls.contains(&e.label)).collect())
}

/// Runs one connecting tree search with the built-in score functions.
pub fn run_search(g: &Graph, seeds: &SeedSets, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run_search_with(g, seeds, cfg, &ScoreRegistry::default())
}

pub fn run_search_with(
    g: &Graph,
    seeds: &SeedSets,
    cfg: &SearchConfig,
    scores: &ScoreRegistry,
) -> Result<SearchOutcome, SearchError> {
    if let Some(name) = &cfg.filters.score {
        if !scores.contains(name) {
            return Err(SearchError::UnknownScore(name.clone()));
        }
    }
    let index = SeedIndex::build(g, seeds)?;
    let mut outcome = if cfg.algorithm.is_bft() {
        bft::run(g, index, cfg)
    } else {
        let mut st = SearchState::new(g, index, cfg.clone());
        st.run();
        st.into_outcome()
    };
    outcome.results = apply_score_topk(outcome.results, &cfg.filters, scores)?;
    Ok(outcome)
}

#[cfg(test)]
pub(crate) mod testkit;
