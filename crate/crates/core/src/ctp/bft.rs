//! Breadth-first enumeration of unrooted trees, with optional merging.
//!
//! Every tree holding at most one seed per set is grown, generation by
//! generation, over any edge adjacent to any of its nodes. A tree that holds
//! a seed of every set is minimized, checked and reported instead of grown.

use super::check::{check_ix, directed_root_ix, minimize_ix, tree_nodes};
use super::tree::{common_count, merge_sorted, EdgeSet};
use super::{allowed_edges, Algorithm, ResultTree, SearchConfig, SearchOutcome, SearchStats, SeedIndex};
use crate::graph::{AdjacencyMode, Graph};
use std::collections::HashSet;
use std::time::Instant;

#[derive(Debug, Clone)]
struct State {
    edges: EdgeSet,
    nodes: Vec<u32>,
    sat: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Edges(EdgeSet),
    Node(u32),
}

impl State {
    fn key(&self) -> Key {
        if self.edges.is_empty() {
            Key::Node(self.nodes[0])
        } else {
            Key::Edges(self.edges.clone())
        }
    }
}

struct Bft<'g> {
    g: &'g Graph,
    idx: SeedIndex,
    cfg: SearchConfig,
    allowed: Option<Vec<bool>>,
    states: Vec<State>,
    seen: HashSet<Key>,
    by_node: Vec<Vec<usize>>,
    results: Vec<ResultTree>,
    result_keys: HashSet<Key>,
    stats: SearchStats,
    deadline: Option<Instant>,
    halted: bool,
}

pub(crate) fn run(g: &Graph, idx: SeedIndex, cfg: &SearchConfig) -> SearchOutcome {
    let mut b = Bft {
        g,
        allowed: allowed_edges(g, &cfg.filters),
        by_node: vec![Vec::new(); g.node_count()],
        idx,
        cfg: cfg.clone(),
        states: Vec::new(),
        seen: HashSet::new(),
        results: Vec::new(),
        result_keys: HashSet::new(),
        stats: SearchStats::default(),
        deadline: cfg.deadline(Instant::now()),
        halted: false,
    };
    b.search();
    let mut results = b.results;
    results.sort_by(|a, b| a.key().cmp(&b.key()));
    b.stats.results_found = results.len() as u64;
    SearchOutcome {
        results,
        stats: b.stats,
    }
}

impl Bft<'_> {
    fn halt_check(&mut self) -> bool {
        if !self.halted {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stats.timed_out = true;
                    self.halted = true;
                }
            }
        }
        self.halted
    }

    fn count_provenance(&mut self) {
        self.stats.provenances_built += 1;
        if let Some(b) = self.cfg.budget {
            if self.stats.provenances_built >= b {
                self.stats.budget_exhausted = true;
                self.halted = true;
            }
        }
    }

    fn complete(&self, sat: u64) -> bool {
        sat & self.idx.full == self.idx.full
    }

    /// Registers a new state; returns its index if it is new and incomplete.
    fn admit(&mut self, s: State) -> Option<usize> {
        if !self.seen.insert(s.key()) {
            self.stats.trees_pruned += 1;
            return None;
        }
        if self.complete(s.sat) {
            self.report(&s);
            return None;
        }
        let i = self.states.len();
        for &n in &s.nodes {
            self.by_node[n as usize].push(i);
        }
        self.states.push(s);
        Some(i)
    }

    fn report(&mut self, s: &State) {
        let edges = minimize_ix(self.g, &self.idx, s.edges.as_slice());
        let nodes = if edges.is_empty() {
            // Minimizing a complete tree leaves a single seed node only when
            // that node satisfies every set on its own.
            match s.nodes.iter().copied().find(|&n| self.complete(self.idx.mask_of(n))) {
                Some(n) => vec![n],
                None => return,
            }
        } else {
            tree_nodes(self.g, &edges).expect("subtree of a tree")
        };
        if check_ix(self.g, &self.idx, &edges, &nodes).is_err() {
            return;
        }
        let root = if self.cfg.filters.uni {
            if edges.is_empty() {
                Some(nodes[0])
            } else {
                match directed_root_ix(self.g, &edges, &nodes) {
                    Some(r) => Some(r),
                    None => return,
                }
            }
        } else {
            None
        };
        let key = if edges.is_empty() {
            Key::Node(nodes[0])
        } else {
            Key::Edges(EdgeSet::from_sorted(edges.clone()))
        };
        if self.result_keys.insert(key) {
            let r = self.idx.report(self.g, &edges, &nodes, root);
            self.results.push(r);
        }
    }

    fn grow(&self, s: &State, e: u32) -> Option<State> {
        if let Some(allowed) = &self.allowed {
            if !allowed[e as usize] {
                return None;
            }
        }
        if let Some(max) = self.cfg.filters.max_edges {
            if s.edges.len() as u64 + 1 > max {
                return None;
            }
        }
        let (a, b) = self.g.ends_ix(e);
        let (ina, inb) = (s.nodes.binary_search(&a).is_ok(), s.nodes.binary_search(&b).is_ok());
        let next = match (ina, inb) {
            (true, false) => b,
            (false, true) => a,
            _ => return None,
        };
        let m = self.idx.mask_of(next);
        if m & s.sat != 0 {
            return None;
        }
        Some(State {
            edges: s.edges.with(e),
            nodes: merge_sorted(&s.nodes, &[next]),
            sat: s.sat | m,
        })
    }

    /// Union of two trees sharing exactly one node `v`, where only `v` may
    /// carry seed sets present in both.
    fn merge(&self, a: &State, b: &State, v: u32) -> Option<State> {
        if a.edges.is_empty() || b.edges.is_empty() {
            return None;
        }
        if a.sat & b.sat != self.idx.mask_of(v) || common_count(&a.nodes, &b.nodes) != 1 {
            return None;
        }
        if let Some(max) = self.cfg.filters.max_edges {
            if (a.edges.len() + b.edges.len()) as u64 > max {
                return None;
            }
        }
        Some(State {
            edges: a.edges.union(&b.edges),
            nodes: merge_sorted(&a.nodes, &b.nodes),
            sat: a.sat | b.sat,
        })
    }

    /// Merges state `i` with every partner; returns admitted products.
    fn merge_round(&mut self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let nodes = self.states[i].nodes.clone();
        for v in nodes {
            let partners = self.by_node[v as usize].clone();
            for p in partners {
                if p == i || self.halt_check() {
                    continue;
                }
                if let Some(m) = self.merge(&self.states[i], &self.states[p], v) {
                    self.count_provenance();
                    if let Some(j) = self.admit(m) {
                        out.push(j);
                    }
                }
            }
        }
        out
    }

    fn search(&mut self) {
        let mut frontier = Vec::new();
        for k in 0..self.idx.seeds.len() {
            let s = self.idx.seeds[k];
            self.count_provenance();
            let st = State {
                edges: EdgeSet::empty(),
                nodes: vec![s],
                sat: self.idx.mask_of(s),
            };
            if let Some(i) = self.admit(st) {
                frontier.push(i);
            }
        }
        let alg = self.cfg.algorithm;
        while !frontier.is_empty() && !self.halt_check() {
            let mut next = Vec::new();
            for &i in &frontier {
                let nodes = self.states[i].nodes.clone();
                for n in nodes {
                    for &e in self.g.adjacent_ix(n, AdjacencyMode::Both) {
                        if self.halt_check() {
                            return;
                        }
                        let Some(t) = self.grow(&self.states[i], e) else { continue };
                        self.count_provenance();
                        let Some(j) = self.admit(t) else { continue };
                        next.push(j);
                        match alg {
                            Algorithm::BftM => next.extend(self.merge_round(j)),
                            Algorithm::BftAm => {
                                let mut work = vec![j];
                                while let Some(w) = work.pop() {
                                    let made = self.merge_round(w);
                                    next.extend(made.iter().copied());
                                    work.extend(made);
                                }
                            }
                            _ => {}
                        }
                    }
                }
            }
            frontier = next;
        }
    }
}

/// Reference collection: BFT without filters or limits.
#[cfg(test)]
pub(crate) fn oracle(g: &Graph, seeds: &super::SeedSets) -> Vec<ResultTree> {
    let idx = SeedIndex::build(g, seeds).unwrap();
    run(g, idx, &SearchConfig::new(Algorithm::Bft)).results
}
