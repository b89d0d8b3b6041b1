//! Tab-separated node and edge files.
//!
//! `nodes.tsv`: `id<TAB>label<TAB>kind<TAB>types` with comma-separated types.
//! `edges.tsv`: `id<TAB>source<TAB>label<TAB>target`. No header, no quoting.

use super::{Edge, EdgeId, Graph, GraphBuilder, GraphError, Node, NodeId, NodeKind};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

fn at(file: &str, line: usize, e: GraphError) -> GraphError {
    GraphError::AtLine {
        file: file.to_string(),
        line,
        source: Box::new(e),
    }
}

fn parse_id(s: &str, what: &str) -> Result<u64, GraphError> {
    s.trim()
        .parse()
        .map_err(|_| GraphError::Malformed(format!("{what} `{s}` is not a non-negative integer")))
}

fn parse_node(line: &str) -> Result<Node, GraphError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 3 || cols.len() > 4 {
        return Err(GraphError::Malformed(format!(
            "expected 4 tab-separated columns, found {}",
            cols.len()
        )));
    }
    let kind = match cols[2].trim() {
        "uri" => NodeKind::Uri,
        "literal" => NodeKind::Literal,
        other => return Err(GraphError::Malformed(format!("unknown node kind `{other}`"))),
    };
    let types = cols
        .get(3)
        .map(|t| {
            t.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect()
        })
        .unwrap_or_default();
    Ok(Node {
        id: NodeId(parse_id(cols[0], "node id")?),
        label: cols[1].to_string(),
        kind,
        types,
    })
}

fn parse_edge(line: &str) -> Result<Edge, GraphError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 4 {
        return Err(GraphError::Malformed(format!(
            "expected 4 tab-separated columns, found {}",
            cols.len()
        )));
    }
    Ok(Edge {
        id: EdgeId(parse_id(cols[0], "edge id")?),
        source: NodeId(parse_id(cols[1], "source id")?),
        label: cols[2].to_string(),
        target: NodeId(parse_id(cols[3], "target id")?),
    })
}

/// Reads a graph from node and edge rows. Errors carry the 1-based line
/// number of the offending row. Blank lines are skipped.
pub fn load_graph<N: BufRead, E: BufRead>(nodes: N, edges: E) -> Result<Graph, GraphError> {
    let mut b = GraphBuilder::new();
    for (i, line) in nodes.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        parse_node(line)
            .and_then(|n| b.add_node(n))
            .map_err(|e| at("nodes", i + 1, e))?;
    }
    for (i, line) in edges.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        parse_edge(line)
            .and_then(|e| b.add_edge(e))
            .map_err(|e| at("edges", i + 1, e))?;
    }
    Ok(b.build())
}

pub fn load_graph_files(nodes: &Path, edges: &Path) -> Result<Graph, GraphError> {
    load_graph(
        BufReader::new(File::open(nodes)?),
        BufReader::new(File::open(edges)?),
    )
}

pub fn write_nodes_tsv<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    for n in g.nodes() {
        let kind = match n.kind {
            NodeKind::Uri => "uri",
            NodeKind::Literal => "literal",
        };
        let types: Vec<&str> = n.types.iter().map(String::as_str).collect();
        writeln!(w, "{}\t{}\t{}\t{}", n.id.0, n.label, kind, types.join(","))?;
    }
    Ok(())
}

pub fn write_edges_tsv<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(w, "{}\t{}\t{}\t{}", e.id.0, e.source.0, e.label, e.target.0)?;
    }
    Ok(())
}
