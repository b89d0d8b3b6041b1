//! Small graph builders shared by the search unit tests.

use crate::graph::{Edge, Graph, GraphBuilder, Node};

/// Nodes 1..=k labelled in order, edges i: node i -> node i+1.
pub(crate) fn line_graph(labels: &[&str]) -> Graph {
    let mut b = GraphBuilder::new();
    for (i, l) in labels.iter().enumerate() {
        b.add_node(Node::uri(i as u64 + 1, *l)).unwrap();
    }
    for i in 1..labels.len() as u64 {
        b.add_edge(Edge::new(i, i, "r", i + 1)).unwrap();
    }
    b.build()
}

/// Dense index of the node with the given label.
pub(crate) fn named(g: &Graph, label: &str) -> u32 {
    g.nodes()
        .iter()
        .position(|n| n.label == label)
        .unwrap_or_else(|| panic!("no node labelled {label}")) as u32
}
