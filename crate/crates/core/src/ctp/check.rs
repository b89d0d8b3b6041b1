//! Tree checks on result candidates: shape, minimization, minimality and the
//! directed root used by UNI.

use super::{SearchError, SeedIndex, SeedSets};
use crate::graph::{EdgeId, Graph, NodeId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultViolation {
    #[error("edges do not form a tree")]
    NotATree,
    #[error("no node of seed set #{0}")]
    MissingSet(usize),
    #[error("several nodes of seed set #{0}")]
    DuplicateSet(usize),
    #[error("leaf {0} is not a seed")]
    NonSeedLeaf(NodeId),
    #[error("removing {0} leaves a component with every seed set")]
    RemovableEdge(EdgeId),
    #[error("unknown element")]
    Unknown,
}

/// Nodes of the tree spanned by `edges` (ascending), or `None` if the edges
/// are not a tree. The empty edge set is not handled here.
pub(crate) fn tree_nodes(g: &Graph, edges: &[u32]) -> Option<Vec<u32>> {
    let mut nodes: Vec<u32> = edges
        .iter()
        .flat_map(|&e| {
            let (s, t) = g.ends_ix(e);
            [s, t]
        })
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    if nodes.len() != edges.len() + 1 {
        return None;
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let pos = |n: u32| nodes.binary_search(&n).expect("endpoint collected");
    for &e in edges {
        let (s, t) = g.ends_ix(e);
        let (a, b) = (find(&mut parent, pos(s)), find(&mut parent, pos(t)));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    Some(nodes)
}

fn degrees(g: &Graph, edges: &[u32], nodes: &[u32]) -> Vec<usize> {
    let mut deg = vec![0; nodes.len()];
    for &e in edges {
        let (s, t) = g.ends_ix(e);
        deg[nodes.binary_search(&s).unwrap()] += 1;
        deg[nodes.binary_search(&t).unwrap()] += 1;
    }
    deg
}

/// Repeatedly drops edges ending in a non-seed leaf.
pub(crate) fn minimize_ix(g: &Graph, idx: &SeedIndex, edges: &[u32]) -> Vec<u32> {
    let mut edges = edges.to_vec();
    loop {
        if edges.is_empty() {
            return edges;
        }
        let nodes = {
            let mut v: Vec<u32> = edges.iter().flat_map(|&e| <[u32; 2]>::from(g.ends_ix(e))).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let deg = degrees(g, &edges, &nodes);
        let before = edges.len();
        edges.retain(|&e| {
            let (s, t) = g.ends_ix(e);
            let loose = |n: u32| deg[nodes.binary_search(&n).unwrap()] == 1 && !idx.is_seed(n);
            !(loose(s) || loose(t))
        });
        if edges.len() == before {
            return edges;
        }
    }
}

/// Checks minimality of a complete tree given by dense edges and nodes.
pub(crate) fn check_ix(g: &Graph, idx: &SeedIndex, edges: &[u32], nodes: &[u32]) -> Result<(), ResultViolation> {
    for i in 0..idx.universal.len() {
        if idx.universal[i] {
            continue;
        }
        let n = nodes.iter().filter(|&&n| idx.mask_of(n) & (1 << i) != 0).count();
        match n {
            0 => return Err(ResultViolation::MissingSet(i)),
            1 => {}
            _ => return Err(ResultViolation::DuplicateSet(i)),
        }
    }
    if edges.is_empty() {
        return Ok(());
    }
    let deg = degrees(g, edges, nodes);
    for (k, &n) in nodes.iter().enumerate() {
        if deg[k] == 1 && !idx.is_seed(n) {
            return Err(ResultViolation::NonSeedLeaf(g.node_at(n).id));
        }
    }
    for &cut in edges {
        let rest: Vec<u32> = edges.iter().copied().filter(|&e| e != cut).collect();
        let (s, _) = g.ends_ix(cut);
        let side = component(g, &rest, s);
        let other: Vec<u32> = nodes.iter().copied().filter(|n| side.binary_search(n).is_err()).collect();
        for part in [&side, &other] {
            let sat = part.iter().fold(0, |acc, &n| acc | idx.mask_of(n));
            if sat & idx.full == idx.full {
                return Err(ResultViolation::RemovableEdge(g.edge_at(cut).id));
            }
        }
    }
    Ok(())
}

/// Nodes reachable from `start` over `edges`, ascending.
fn component(g: &Graph, edges: &[u32], start: u32) -> Vec<u32> {
    let mut seen = vec![start];
    let mut changed = true;
    while changed {
        changed = false;
        for &e in edges {
            let (s, t) = g.ends_ix(e);
            let (hs, ht) = (seen.contains(&s), seen.contains(&t));
            if hs != ht {
                seen.push(if hs { t } else { s });
                changed = true;
            }
        }
    }
    seen.sort_unstable();
    seen
}

/// The node with no incoming tree edge when every other node has exactly one.
pub(crate) fn directed_root_ix(g: &Graph, edges: &[u32], nodes: &[u32]) -> Option<u32> {
    let mut indeg = vec![0usize; nodes.len()];
    for &e in edges {
        let (_, t) = g.ends_ix(e);
        indeg[nodes.binary_search(&t).ok()?] += 1;
    }
    let mut root = None;
    for (k, &d) in indeg.iter().enumerate() {
        match d {
            0 if root.is_none() => root = Some(nodes[k]),
            1 => {}
            _ => return None,
        }
    }
    root
}

fn dense_edges(g: &Graph, edges: &[EdgeId]) -> Result<Vec<u32>, SearchError> {
    let mut v = edges
        .iter()
        .map(|&e| g.edge_ix(e).ok_or(SearchError::NotATree))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    v.dedup();
    if v.len() != edges.len() {
        return Err(SearchError::NotATree);
    }
    Ok(v)
}

/// Whether the edges form a tree (connected, acyclic, no repeated edge).
/// The empty set counts as the one-node tree.
pub fn is_tree(g: &Graph, edges: &[EdgeId]) -> bool {
    match dense_edges(g, edges) {
        Ok(v) => v.is_empty() || tree_nodes(g, &v).is_some(),
        Err(_) => false,
    }
}

/// Removes edges leading to no seed until every leaf is a seed.
pub fn minimize(g: &Graph, edges: &[EdgeId], seeds: &SeedSets) -> Result<Vec<EdgeId>, SearchError> {
    let idx = SeedIndex::build(g, seeds)?;
    let v = dense_edges(g, edges)?;
    if !v.is_empty() && tree_nodes(g, &v).is_none() {
        return Err(SearchError::NotATree);
    }
    Ok(minimize_ix(g, &idx, &v).into_iter().map(|e| g.edge_at(e).id).collect())
}

/// Checks that a reported tree is a minimal connecting tree for the seed
/// sets. `single` names the node of an edgeless result.
pub fn check_result(
    g: &Graph,
    edges: &[EdgeId],
    single: Option<NodeId>,
    seeds: &SeedSets,
) -> Result<(), ResultViolation> {
    let idx = SeedIndex::build(g, seeds).map_err(|_| ResultViolation::Unknown)?;
    let v = dense_edges(g, edges).map_err(|_| ResultViolation::NotATree)?;
    let nodes = if v.is_empty() {
        let n = single.ok_or(ResultViolation::NotATree)?;
        vec![g.node_ix(n).ok_or(ResultViolation::Unknown)?]
    } else {
        tree_nodes(g, &v).ok_or(ResultViolation::NotATree)?
    };
    check_ix(g, &idx, &v, &nodes)
}

/// The node reaching every other tree node by a directed path inside the
/// tree, if any. Edgeless trees have none to report here.
pub fn directed_root(g: &Graph, edges: &[EdgeId]) -> Option<NodeId> {
    let v = dense_edges(g, edges).ok()?;
    if v.is_empty() {
        return None;
    }
    let nodes = tree_nodes(g, &v)?;
    directed_root_ix(g, &v, &nodes).map(|n| g.node_at(n).id)
}
