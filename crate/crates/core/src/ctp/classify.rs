//! Simple tree decomposition of results.
//!
//! A result is split at its internal seed nodes. Each piece has seeds as
//! leaves and non-seeds inside; the largest leaf count over the pieces tells
//! which completeness guarantee covers the result.

use super::check::tree_nodes;
use super::{Algorithm, SearchError, SeedIndex, SeedSets};
use crate::graph::{EdgeId, Graph, NodeId};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// Ascending.
    pub edges: Vec<EdgeId>,
    /// Ascending.
    pub leaves: Vec<NodeId>,
    /// The non-seed node where all seed paths of the piece meet, when the
    /// piece is such a star of paths (a path with an inner node counts).
    pub center: Option<NodeId>,
}

impl Piece {
    pub fn is_rooted_merge(&self) -> bool {
        self.center.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub pieces: Vec<Piece>,
    /// Largest number of leaves of a piece; 0 for an edgeless result.
    pub p: usize,
    /// No node has more than two tree edges.
    pub is_path: bool,
}

impl Classification {
    /// Every piece is a rooted merge at a non-seed node or a single edge
    /// between two seeds. MoLESP is guaranteed to find such results.
    pub fn molesp_guaranteed(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.is_rooted_merge() || p.edges.len() == 1)
    }

    /// Whether `alg` is guaranteed to report this result of an unfiltered
    /// search over `m` seed sets.
    pub fn guaranteed_for(&self, alg: Algorithm, m: usize) -> bool {
        match alg {
            Algorithm::Bft | Algorithm::BftM | Algorithm::BftAm | Algorithm::Gam => true,
            Algorithm::Esp => m <= 2,
            Algorithm::MoEsp => m <= 2 || self.p <= 2,
            Algorithm::Lesp => m <= 2 || (self.pieces.len() == 1 && self.pieces[0].is_rooted_merge()),
            Algorithm::MoLesp => m <= 3 || self.molesp_guaranteed(),
        }
    }
}

pub fn classify_result(g: &Graph, edges: &[EdgeId], seeds: &SeedSets) -> Result<Classification, SearchError> {
    let idx = SeedIndex::build(g, seeds)?;
    let mut dense = edges
        .iter()
        .map(|&e| g.edge_ix(e).ok_or(SearchError::NotATree))
        .collect::<Result<Vec<u32>, _>>()?;
    dense.sort_unstable();
    if dense.is_empty() {
        return Ok(Classification {
            pieces: Vec::new(),
            p: 0,
            is_path: true,
        });
    }
    let nodes = tree_nodes(g, &dense).ok_or(SearchError::NotATree)?;
    let mut deg = vec![0usize; nodes.len()];
    for &e in &dense {
        let (s, t) = g.ends_ix(e);
        deg[nodes.binary_search(&s).unwrap()] += 1;
        deg[nodes.binary_search(&t).unwrap()] += 1;
    }
    for (k, &n) in nodes.iter().enumerate() {
        if deg[k] == 1 && !idx.is_seed(n) {
            return Err(SearchError::NotAResult(format!("leaf {} is not a seed", g.node_at(n).id)));
        }
    }

    // Edges meeting at a non-seed node belong to the same piece.
    let mut parent: Vec<usize> = (0..dense.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut first_at: BTreeMap<u32, usize> = BTreeMap::new();
    for (k, &e) in dense.iter().enumerate() {
        let (s, t) = g.ends_ix(e);
        for n in [s, t] {
            if idx.is_seed(n) {
                continue;
            }
            match first_at.get(&n) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, j), find(&mut parent, k));
                    parent[a] = b;
                }
                None => {
                    first_at.insert(n, k);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for k in 0..dense.len() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(dense[k]);
    }

    let mut pieces: Vec<Piece> = groups
        .into_values()
        .map(|pe| piece(g, &idx, &pe))
        .collect();
    pieces.sort_by(|a, b| a.edges.cmp(&b.edges));
    let p = pieces.iter().map(|x| x.leaves.len()).max().unwrap_or(0);
    Ok(Classification {
        pieces,
        p,
        is_path: deg.iter().all(|&d| d <= 2),
    })
}

fn piece(g: &Graph, idx: &SeedIndex, edges: &[u32]) -> Piece {
    let mut deg: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in edges {
        let (s, t) = g.ends_ix(e);
        *deg.entry(s).or_default() += 1;
        *deg.entry(t).or_default() += 1;
    }
    let leaves: Vec<NodeId> = deg
        .iter()
        .filter(|(_, &d)| d == 1)
        .map(|(&n, _)| g.node_at(n).id)
        .collect();
    let branching: Vec<u32> = deg.iter().filter(|(_, &d)| d >= 3).map(|(&n, _)| n).collect();
    let center = match branching.as_slice() {
        [c] if !idx.is_seed(*c) => Some(*c),
        [] => deg
            .iter()
            .find(|(&n, &d)| d == 2 && !idx.is_seed(n))
            .map(|(&n, _)| n),
        _ => None,
    };
    let mut ids: Vec<EdgeId> = edges.iter().map(|&e| g.edge_at(e).id).collect();
    ids.sort_unstable();
    Piece {
        edges: ids,
        leaves,
        center: center.map(|c| g.node_at(c).id),
    }
}
