//! Immutable directed multigraph with labelled nodes and edges.
//!
//! Edges are identified by id, so parallel edges are allowed. Internally
//! nodes and edges are stored densely in ascending id order; the search code
//! works on those dense indices (`u32`) and converts back to ids when it
//! reports results.

mod predicate;
mod tsv;

pub use predicate::{glob_match, satisfies};
pub use tsv::{load_graph, load_graph_files, write_edges_tsv, write_nodes_tsv};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Uri,
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    pub types: BTreeSet<String>,
}

impl Node {
    pub fn uri(id: u64, label: impl Into<String>) -> Self {
        Node {
            id: NodeId(id),
            label: label.into(),
            kind: NodeKind::Uri,
            types: BTreeSet::new(),
        }
    }

    pub fn with_type(mut self, ty: impl Into<String>) -> Self {
        self.types.insert(ty.into());
        self
    }

    pub fn literal(id: u64, label: impl Into<String>) -> Self {
        Node {
            kind: NodeKind::Literal,
            ..Node::uri(id, label)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NodeKind::Uri => write!(f, "{}", self.label),
            NodeKind::Literal => write!(f, "\"{}\"", self.label),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: NodeId,
    pub target: NodeId,
    pub label: String,
}

impl Edge {
    pub fn new(id: u64, source: u64, label: impl Into<String>, target: u64) -> Self {
        Edge {
            id: EdgeId(id),
            source: NodeId(source),
            target: NodeId(target),
            label: label.into(),
        }
    }
}

/// A graph element a predicate can be evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyMode {
    /// Incoming and outgoing edges; the search treats the graph as undirected.
    Both,
    Outgoing,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node id {0}")]
    DuplicateNode(u64),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(u64),
    #[error("edge {edge} references unknown node {node}")]
    UnknownEndpoint { edge: u64, node: u64 },
    #[error("edge {edge} leaves literal node {node}")]
    LiteralSource { edge: u64, node: u64 },
    #[error("unknown node id {0}")]
    UnknownNode(u64),
    #[error("unknown edge id {0}")]
    UnknownEdge(u64),
    #[error("condition on `type` applied to edge {0}; edges carry no types")]
    TypeOnEdge(u64),
    #[error("malformed row: {0}")]
    Malformed(String),
    #[error("{file}:{line}: {source}")]
    AtLine {
        file: String,
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Accumulates nodes and edges and checks referential integrity on `build`.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_ids: HashMap<NodeId, usize>,
    edge_ids: HashMap<EdgeId, usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: Node) -> Result<(), GraphError> {
        if self.node_ids.contains_key(&node.id) {
            return Err(GraphError::DuplicateNode(node.id.0));
        }
        self.node_ids.insert(node.id, self.nodes.len());
        self.nodes.push(node);
        Ok(())
    }

    /// Endpoints are checked immediately, so nodes must be added first.
    pub fn add_edge(&mut self, edge: Edge) -> Result<(), GraphError> {
        if self.edge_ids.contains_key(&edge.id) {
            return Err(GraphError::DuplicateEdge(edge.id.0));
        }
        for end in [edge.source, edge.target] {
            if !self.node_ids.contains_key(&end) {
                return Err(GraphError::UnknownEndpoint {
                    edge: edge.id.0,
                    node: end.0,
                });
            }
        }
        let src = &self.nodes[self.node_ids[&edge.source]];
        if src.kind == NodeKind::Literal {
            return Err(GraphError::LiteralSource {
                edge: edge.id.0,
                node: src.id.0,
            });
        }
        self.edge_ids.insert(edge.id, self.edges.len());
        self.edges.push(edge);
        Ok(())
    }

    pub fn build(self) -> Graph {
        Graph::from_parts(self.nodes, self.edges)
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_pos: HashMap<NodeId, u32>,
    edge_pos: HashMap<EdgeId, u32>,
    ends: Vec<(u32, u32)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    all_adj: Vec<Vec<u32>>,
}

impl Graph {
    fn from_parts(mut nodes: Vec<Node>, mut edges: Vec<Edge>) -> Graph {
        nodes.sort_by_key(|n| n.id);
        edges.sort_by_key(|e| e.id);
        let node_pos: HashMap<NodeId, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id, i as u32))
            .collect();
        let edge_pos = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id, i as u32))
            .collect();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        let mut all_adj = vec![Vec::new(); nodes.len()];
        let mut ends = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let s = node_pos[&e.source];
            let t = node_pos[&e.target];
            ends.push((s, t));
            out_adj[s as usize].push(i as u32);
            in_adj[t as usize].push(i as u32);
            all_adj[s as usize].push(i as u32);
            if s != t {
                all_adj[t as usize].push(i as u32);
            }
        }
        Graph {
            nodes,
            edges,
            node_pos,
            edge_pos,
            ends,
            out_adj,
            in_adj,
            all_adj,
        }
    }

    pub fn empty() -> Graph {
        Graph::from_parts(Vec::new(), Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.node_pos.get(&id).map(|&i| &self.nodes[i as usize])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_pos.get(&id).map(|&i| &self.edges[i as usize])
    }

    pub fn contains(&self, elem: Element) -> bool {
        match elem {
            Element::Node(n) => self.node_pos.contains_key(&n),
            Element::Edge(e) => self.edge_pos.contains_key(&e),
        }
    }

    /// Adjacent edge ids in ascending order.
    pub fn adjacent_edges(&self, n: NodeId, mode: AdjacencyMode) -> Result<Vec<EdgeId>, GraphError> {
        let ix = self.node_ix(n).ok_or(GraphError::UnknownNode(n.0))?;
        Ok(self
            .adjacent_ix(ix, mode)
            .iter()
            .map(|&e| self.edges[e as usize].id)
            .collect())
    }

    /// Number of adjacent edges counted in both directions.
    pub fn degree(&self, n: NodeId) -> Option<usize> {
        self.node_ix(n).map(|ix| self.degree_ix(ix))
    }

    // ---- dense index view used by the search ----

    pub fn node_ix(&self, id: NodeId) -> Option<u32> {
        self.node_pos.get(&id).copied()
    }

    pub fn edge_ix(&self, id: EdgeId) -> Option<u32> {
        self.edge_pos.get(&id).copied()
    }

    pub fn node_at(&self, ix: u32) -> &Node {
        &self.nodes[ix as usize]
    }

    pub fn edge_at(&self, ix: u32) -> &Edge {
        &self.edges[ix as usize]
    }

    /// `(source, target)` dense indices of an edge.
    pub fn ends_ix(&self, e: u32) -> (u32, u32) {
        self.ends[e as usize]
    }

    /// The endpoint of `e` opposite to `n`.
    pub fn other_end_ix(&self, e: u32, n: u32) -> u32 {
        let (s, t) = self.ends[e as usize];
        if s == n {
            t
        } else {
            s
        }
    }

    pub fn adjacent_ix(&self, n: u32, mode: AdjacencyMode) -> &[u32] {
        match mode {
            AdjacencyMode::Both => &self.all_adj[n as usize],
            AdjacencyMode::Outgoing => &self.out_adj[n as usize],
        }
    }

    pub fn incoming_ix(&self, n: u32) -> &[u32] {
        &self.in_adj[n as usize]
    }

    pub fn degree_ix(&self, n: u32) -> usize {
        self.out_adj[n as usize].len() + self.in_adj[n as usize].len()
    }
}
