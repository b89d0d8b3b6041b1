//! Grow-and-aggressive-merge search and its pruning variants.

use super::queue::{Entry, PairQueue};
use super::tree::{common_count, merge_sorted, EdgeSet, Provenance, RootedTree, TreeId};
use super::{
    allowed_edges, Algorithm, ResultTree, SearchConfig, SearchError, SearchOutcome, SearchStats, SeedIndex, SeedSets,
};
use crate::graph::{AdjacencyMode, Graph};
use std::collections::HashSet;
use std::time::Instant;

/// Identity of a result: its edges, or its node when it has none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ResultKey {
    Edges(EdgeSet),
    Node(u32),
}

/// All state of one GAM-family run.
pub struct SearchState<'g> {
    g: &'g Graph,
    idx: SeedIndex,
    cfg: SearchConfig,
    allowed: Option<Vec<bool>>,
    uni: bool,
    arena: Vec<RootedTree>,
    hist: HashSet<EdgeSet>,
    rooted: HashSet<(EdgeSet, u32)>,
    trees_rooted_in: Vec<Vec<TreeId>>,
    queue: PairQueue,
    queued: HashSet<(TreeId, u32)>,
    ss: Vec<u64>,
    results: Vec<ResultTree>,
    result_keys: HashSet<ResultKey>,
    stats: SearchStats,
    deadline: Option<Instant>,
    halted: bool,
}

impl<'g> SearchState<'g> {
    /// A search before initialization. The BFT algorithms go through
    /// `run_search` instead.
    pub fn start(g: &'g Graph, seeds: &SeedSets, cfg: SearchConfig) -> Result<Self, SearchError> {
        Ok(SearchState::new(g, SeedIndex::build(g, seeds)?, cfg))
    }

    pub(crate) fn new(g: &'g Graph, idx: SeedIndex, cfg: SearchConfig) -> Self {
        let multi = idx.wants_multi_queue(cfg.multi_queue);
        SearchState {
            g,
            allowed: allowed_edges(g, &cfg.filters),
            uni: cfg.filters.uni,
            arena: Vec::new(),
            hist: HashSet::new(),
            rooted: HashSet::new(),
            trees_rooted_in: vec![Vec::new(); g.node_count()],
            queue: PairQueue::new(multi),
            queued: HashSet::new(),
            ss: idx.mask.clone(),
            results: Vec::new(),
            result_keys: HashSet::new(),
            stats: SearchStats::default(),
            deadline: cfg.deadline(Instant::now()),
            halted: false,
            idx,
            cfg,
        }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.arena
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn results(&self) -> &[ResultTree] {
        &self.results
    }

    /// Seed signature of a node.
    pub fn signature(&self, n: u32) -> u64 {
        self.ss[n as usize]
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    /// Finds a built tree by dense edges and root.
    pub fn find(&self, edges: &[u32], root: u32) -> Option<TreeId> {
        let key = EdgeSet::from_unsorted(edges.to_vec());
        self.arena
            .iter()
            .position(|t| t.root == root && t.edges == key)
            .map(|i| i as TreeId)
    }

    fn algorithm(&self) -> Algorithm {
        self.cfg.algorithm
    }

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

    /// Builds one Init tree per distinct seed node.
    pub fn initialize(&mut self) {
        for i in 0..self.idx.seeds.len() {
            if self.halt_check() {
                return;
            }
            let s = self.idx.seeds[i];
            self.count_provenance();
            self.process_tree(RootedTree::init(s, self.idx.mask_of(s)));
        }
    }

    /// Runs to exhaustion, timeout or budget.
    pub fn run(&mut self) {
        self.initialize();
        while self.advance() {}
    }

    /// Pops and processes one queued pair. False once the queue is empty or
    /// the search has halted.
    pub fn advance(&mut self) -> bool {
        if self.halt_check() {
            return false;
        }
        let Some(entry) = self.queue.pop() else {
            return false;
        };
        self.stats.queue_pops += 1;
        self.step(entry.tree(), entry.edge());
        true
    }

    /// One main-loop iteration on a given (tree, edge) pair. Returns the
    /// grown tree's id when it survives pruning.
    pub fn step(&mut self, tree: TreeId, edge: u32) -> Option<TreeId> {
        let t = self.try_grow(tree, edge)?;
        self.count_provenance();
        if t.rooted_path {
            self.ss[t.root as usize] |= t.sat;
        }
        self.process_tree(t)
    }

    /// The node a Grow over `e` would add, if all Grow conditions hold.
    fn grow_target(&self, t: &RootedTree, e: u32) -> Option<u32> {
        if t.has_mo {
            return None;
        }
        if let Some(allowed) = &self.allowed {
            if !allowed[e as usize] {
                return None;
            }
        }
        if let Some(max) = self.cfg.filters.max_edges {
            if t.edges.len() as u64 + 1 > max {
                return None;
            }
        }
        let (s, d) = self.g.ends_ix(e);
        let next = if self.uni {
            if d != t.root {
                return None;
            }
            s
        } else if s == t.root {
            d
        } else if d == t.root {
            s
        } else {
            return None;
        };
        if t.contains_node(next) || self.idx.mask_of(next) & t.sat != 0 {
            return None;
        }
        Some(next)
    }

    pub fn try_grow(&self, tree: TreeId, e: u32) -> Option<RootedTree> {
        let t = &self.arena[tree as usize];
        let next = self.grow_target(t, e)?;
        let m = self.idx.mask_of(next);
        Some(RootedTree {
            edges: t.edges.with(e),
            nodes: merge_sorted(&t.nodes, &[next]).into(),
            root: next,
            sat: t.sat | m,
            prov: Provenance::Grow { parent: tree, edge: e },
            has_mo: false,
            rooted_path: t.rooted_path && m == 0,
        })
    }

    /// Merge of two trees with the same root and no other common node. Seed
    /// sets may overlap only through the root itself.
    pub fn try_merge(&self, left: TreeId, right: TreeId) -> Option<RootedTree> {
        let (a, b) = (&self.arena[left as usize], &self.arena[right as usize]);
        if a.root != b.root || a.edges.is_empty() || b.edges.is_empty() {
            return None;
        }
        if a.sat & b.sat != self.idx.mask_of(a.root) {
            return None;
        }
        if let Some(max) = self.cfg.filters.max_edges {
            if (a.edges.len() + b.edges.len()) as u64 > max {
                return None;
            }
        }
        if common_count(&a.nodes, &b.nodes) != 1 {
            return None;
        }
        Some(RootedTree {
            edges: a.edges.union(&b.edges),
            nodes: merge_sorted(&a.nodes, &b.nodes).into(),
            root: a.root,
            sat: a.sat | b.sat,
            prov: Provenance::Merge { left, right },
            has_mo: a.has_mo || b.has_mo,
            rooted_path: false,
        })
    }

    pub fn is_new(&self, t: &RootedTree) -> bool {
        let alg = self.algorithm();
        let fresh_rooted = || !self.rooted.contains(&(t.edges.clone(), t.root));
        if !alg.prunes_edge_sets() || t.edges.is_empty() {
            return fresh_rooted();
        }
        if !self.hist.contains(&t.edges) {
            return true;
        }
        alg.spares_merges()
            && matches!(t.prov, Provenance::Merge { .. })
            && self.ss[t.root as usize].count_ones() >= 3
            && self.g.degree_ix(t.root) >= 3
            && fresh_rooted()
    }

    fn complete(&self, t: &RootedTree) -> bool {
        t.sat & self.idx.full == self.idx.full
    }

    pub fn process_tree(&mut self, t: RootedTree) -> Option<TreeId> {
        if !self.is_new(&t) {
            self.stats.trees_pruned += 1;
            return None;
        }
        self.hist.insert(t.edges.clone());
        self.rooted.insert((t.edges.clone(), t.root));
        let id = self.arena.len() as TreeId;
        let complete = self.complete(&t);
        self.arena.push(t);
        if complete {
            self.record_result(id);
            return Some(id);
        }
        self.record_for_merging(id);
        self.merge_all(id);
        self.enqueue(id);
        Some(id)
    }

    fn record_result(&mut self, id: TreeId) {
        let t = &self.arena[id as usize];
        let key = if t.edges.is_empty() {
            ResultKey::Node(t.root)
        } else {
            ResultKey::Edges(t.edges.clone())
        };
        if self.result_keys.insert(key) {
            let root = self.uni.then_some(t.root);
            let r = self.idx.report(self.g, t.edges.as_slice(), &t.nodes, root);
            self.results.push(r);
            self.stats.results_found += 1;
        }
    }

    fn record_for_merging(&mut self, id: TreeId) {
        let root = self.arena[id as usize].root;
        self.trees_rooted_in[root as usize].push(id);
        if self.algorithm().makes_mo_copies() && !self.uni {
            self.mo_copies(id);
        }
    }

    /// Re-rooted copies at the tree's other seeds, made only when the tree
    /// satisfies strictly more seed sets than each of its children.
    fn mo_copies(&mut self, id: TreeId) {
        let t = self.arena[id as usize].clone();
        let sat_of = |c: TreeId| self.arena[c as usize].sat.count_ones();
        let child_max = match t.prov {
            Provenance::Init | Provenance::Mo { .. } => return,
            Provenance::Grow { parent, .. } => sat_of(parent),
            Provenance::Merge { left, right } => sat_of(left).max(sat_of(right)),
        };
        if t.sat.count_ones() <= child_max {
            return;
        }
        for &n in t.nodes.iter() {
            if n == t.root || !self.idx.is_seed(n) || self.halted {
                continue;
            }
            if !self.rooted.insert((t.edges.clone(), n)) {
                continue;
            }
            self.count_provenance();
            let copy = RootedTree {
                root: n,
                prov: Provenance::Mo { parent: id },
                has_mo: true,
                rooted_path: false,
                ..t.clone()
            };
            let cid = self.arena.len() as TreeId;
            self.arena.push(copy);
            self.trees_rooted_in[n as usize].push(cid);
            self.merge_all(cid);
        }
    }

    /// Merges the tree with every partner sharing its root; products go
    /// through `process_tree`, which merges them in turn.
    fn merge_all(&mut self, id: TreeId) {
        let root = self.arena[id as usize].root;
        let partners = self.trees_rooted_in[root as usize].clone();
        for p in partners {
            if p == id {
                continue;
            }
            if self.halt_check() {
                return;
            }
            if let Some(m) = self.try_merge(id, p) {
                self.count_provenance();
                self.process_tree(m);
            }
        }
    }

    fn enqueue(&mut self, id: TreeId) {
        let t = &self.arena[id as usize];
        if t.has_mo {
            return;
        }
        let adj = if self.uni {
            self.g.incoming_ix(t.root)
        } else {
            self.g.adjacent_ix(t.root, AdjacencyMode::Both)
        };
        let mut fresh = Vec::new();
        for &e in adj {
            if self.grow_target(t, e).is_some() && !self.queued.contains(&(id, e)) {
                fresh.push(e);
            }
        }
        let (sat, len, key, root) = (t.sat, t.edges.len(), t.edges.key(), t.root);
        for e in fresh {
            self.queued.insert((id, e));
            self.queue
                .push(sat, Entry::new(self.cfg.priority, len, key, root, id, e));
        }
    }

    pub fn into_outcome(self) -> SearchOutcome {
        let mut results = self.results;
        results.sort_by(|a, b| a.key().cmp(&b.key()));
        SearchOutcome {
            results,
            stats: self.stats,
        }
    }
}
