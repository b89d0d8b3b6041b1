//! Search trees and their canonical edge-set identity.

use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A sorted set of dense edge indices with a precomputed key.
///
/// Hashing uses the key only; equality compares the full lists, so two
/// distinct sets that collide on the key are still told apart.
#[derive(Debug, Clone)]
pub struct EdgeSet {
    key: u64,
    edges: Arc<[u32]>,
}

/// Order-independent by construction: the input is sorted first.
fn edge_set_key(sorted: &[u32]) -> u64 {
    // splitmix64 finalizer folded over the ids.
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15 ^ sorted.len() as u64;
    for &e in sorted {
        h ^= e as u64;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h ^= h >> 31;
    }
    h
}

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet::from_sorted(Vec::new())
    }

    pub fn from_sorted(edges: Vec<u32>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        EdgeSet {
            key: edge_set_key(&edges),
            edges: edges.into(),
        }
    }

    pub fn from_unsorted(mut edges: Vec<u32>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet::from_sorted(edges)
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: u32) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn with(&self, e: u32) -> EdgeSet {
        let mut v = self.edges.to_vec();
        let at = v.binary_search(&e).unwrap_or_else(|i| i);
        v.insert(at, e);
        EdgeSet::from_sorted(v)
    }

    /// Union of two disjoint sets.
    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet::from_sorted(merge_sorted(&self.edges, &other.edges))
    }
}

impl PartialEq for EdgeSet {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.edges == other.edges
    }
}

impl Eq for EdgeSet {}

impl Hash for EdgeSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.key);
    }
}

pub(crate) fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Number of common elements of two sorted slices.
pub(crate) fn common_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub type TreeId = u32;

/// How a rooted tree was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Init,
    Grow { parent: TreeId, edge: u32 },
    Merge { left: TreeId, right: TreeId },
    /// Copy of `parent` re-rooted at one of its seeds.
    Mo { parent: TreeId },
}

/// A tree together with a distinguished root, as built by the search.
/// Node and edge references are dense graph indices.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub(crate) edges: EdgeSet,
    pub(crate) nodes: Arc<[u32]>,
    pub(crate) root: u32,
    pub(crate) sat: u64,
    pub(crate) prov: Provenance,
    /// Some ancestor (or the tree itself) is a Mo copy; such trees never grow.
    pub(crate) has_mo: bool,
    /// The tree is a path from a single seed to the root with no other seed.
    pub(crate) rooted_path: bool,
}

impl RootedTree {
    pub(crate) fn init(node: u32, sat: u64) -> Self {
        RootedTree {
            edges: EdgeSet::empty(),
            nodes: vec![node].into(),
            root: node,
            sat,
            prov: Provenance::Init,
            has_mo: false,
            rooted_path: true,
        }
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn sat(&self) -> u64 {
        self.sat
    }

    pub fn provenance(&self) -> Provenance {
        self.prov
    }

    pub fn is_mo(&self) -> bool {
        self.has_mo
    }

    pub fn contains_node(&self, n: u32) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }
}
