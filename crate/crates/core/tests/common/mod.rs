//! Shared helpers for the integration tests: an exhaustive subtree
//! enumerator used as the reference for connecting tree results, and the
//! post-filters applied to its output.

#![allow(dead_code)]

use eql_core::ctp::{ResultTree, SearchOutcome, SeedSet, SeedSets};
use eql_core::graph::{EdgeId, Graph, NodeId};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Identity of a result: ascending edge ids, or the single node of an
/// edgeless result.
pub type Key = (Vec<u64>, Option<u64>);

pub fn key_of(r: &ResultTree) -> Key {
    let (e, n) = r.key();
    (e.into_iter().map(|e| e.0).collect(), n.map(|n| n.0))
}

pub fn keys(o: &SearchOutcome) -> BTreeSet<Key> {
    o.results.iter().map(key_of).collect()
}

pub fn seed_vecs(s: &SeedSets) -> Vec<Vec<u64>> {
    s.sets()
        .iter()
        .map(|s| match s {
            SeedSet::Nodes(ns) => ns.iter().map(|n| n.0).collect(),
            SeedSet::Universal => panic!("the reference enumerator needs explicit seed sets"),
        })
        .collect()
}

/// A reference result with the seed chosen from each set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefResult {
    pub edges: Vec<u64>,
    pub nodes: Vec<u64>,
    pub seeds: Vec<u64>,
}

impl RefResult {
    pub fn key(&self) -> Key {
        if self.edges.is_empty() {
            (Vec::new(), Some(self.nodes[0]))
        } else {
            (self.edges.clone(), None)
        }
    }
}

/// Every minimal connecting tree, found by enumerating all subtrees of the
/// graph. Only for graphs with at most 64 edges and 128 nodes.
pub fn reference(g: &Graph, sets: &[Vec<u64>]) -> Vec<RefResult> {
    let edges = g.edges();
    let nodes = g.nodes();
    assert!(edges.len() <= 64 && nodes.len() <= 128, "graph too large for the reference enumerator");
    let ix: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.0, i)).collect();
    let ends: Vec<(usize, usize)> = edges.iter().map(|e| (ix[&e.source.0], ix[&e.target.0])).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
    for (k, &(s, t)) in ends.iter().enumerate() {
        if s != t {
            adj[s].push((k, t));
            adj[t].push((k, s));
        }
    }
    let set_masks: Vec<u128> = sets
        .iter()
        .map(|s| s.iter().fold(0u128, |m, id| m | 1 << ix[id]))
        .collect();

    let mut out = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        if set_masks.iter().all(|m| m & (1 << i) != 0) {
            out.push(RefResult {
                edges: Vec::new(),
                nodes: vec![n.id.0],
                seeds: vec![n.id.0; sets.len()],
            });
        }
    }

    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack: Vec<(u64, u128)> = Vec::new();
    for (k, &(s, t)) in ends.iter().enumerate() {
        if s != t && seen.insert(1 << k) {
            stack.push((1 << k, 1 << s | 1 << t));
        }
    }
    while let Some((em, nm)) = stack.pop() {
        if let Some(r) = as_result(em, nm, &ends, &set_masks) {
            out.push(RefResult {
                edges: (0..edges.len()).filter(|k| em >> k & 1 == 1).map(|k| edges[k].id.0).collect(),
                nodes: (0..nodes.len()).filter(|i| nm >> i & 1 == 1).map(|i| nodes[i].id.0).collect(),
                seeds: r.iter().map(|&i| nodes[i].id.0).collect(),
            });
        }
        for (n, list) in adj.iter().enumerate() {
            if nm >> n & 1 == 0 {
                continue;
            }
            for &(k, other) in list {
                if nm >> other & 1 == 0 && seen.insert(em | 1 << k) {
                    stack.push((em | 1 << k, nm | 1 << other));
                }
            }
        }
    }
    out.sort();
    out
}

/// The seed node of each set if the subtree is a minimal connecting tree.
fn as_result(em: u64, nm: u128, ends: &[(usize, usize)], set_masks: &[u128]) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    for m in set_masks {
        let hit = m & nm;
        if hit.count_ones() != 1 {
            return None;
        }
        chosen.push(hit.trailing_zeros() as usize);
    }
    let any_seed = set_masks.iter().fold(0u128, |a, m| a | m);
    let tree_edges: Vec<usize> = (0..ends.len()).filter(|k| em >> k & 1 == 1).collect();
    let mut deg: HashMap<usize, usize> = HashMap::new();
    for &k in &tree_edges {
        *deg.entry(ends[k].0).or_default() += 1;
        *deg.entry(ends[k].1).or_default() += 1;
    }
    if deg.iter().any(|(&n, &d)| d == 1 && any_seed >> n & 1 == 0) {
        return None;
    }
    // Cutting any edge must leave no side holding every set.
    for &cut in &tree_edges {
        let mut side: u128 = 1 << ends[cut].0;
        loop {
            let before = side;
            for &k in &tree_edges {
                let (s, t) = ends[k];
                if k != cut && (side >> s & 1 == 1 || side >> t & 1 == 1) {
                    side |= 1 << s | 1 << t;
                }
            }
            if side == before {
                break;
            }
        }
        let other = nm & !side;
        for part in [side, other] {
            if set_masks.iter().all(|m| m & part != 0) {
                return None;
            }
        }
    }
    Some(chosen)
}

pub fn reference_keys(g: &Graph, sets: &[Vec<u64>]) -> BTreeSet<Key> {
    reference(g, sets).iter().map(RefResult::key).collect()
}

/// Some tree node reaches every other one along tree edges in their
/// direction. An edgeless tree qualifies.
pub fn is_unidirectional(g: &Graph, edges: &[u64]) -> bool {
    if edges.is_empty() {
        return true;
    }
    let es: Vec<(u64, u64)> = edges
        .iter()
        .map(|&e| {
            let e = g.edge(EdgeId(e)).unwrap();
            (e.source.0, e.target.0)
        })
        .collect();
    let nodes: BTreeSet<u64> = es.iter().flat_map(|&(s, t)| [s, t]).collect();
    nodes.iter().any(|&r| {
        let mut reach = BTreeSet::from([r]);
        loop {
            let before = reach.len();
            for &(s, t) in &es {
                if reach.contains(&s) {
                    reach.insert(t);
                }
            }
            if reach.len() == before {
                break;
            }
        }
        reach.len() == nodes.len()
    })
}

pub fn labels_within(g: &Graph, edges: &[u64], allowed: &[&str]) -> bool {
    edges
        .iter()
        .all(|&e| allowed.contains(&g.edge(EdgeId(e)).unwrap().label.as_str()))
}

pub fn node(id: u64) -> NodeId {
    NodeId(id)
}
