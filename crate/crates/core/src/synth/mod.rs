//! Benchmark graph generators: chain, line, comb, star and connected dense
//! forests, plus small random instances for oracle testing.
//!
//! Every generator is a pure function of its parameters (and, where used,
//! its random seed). Ids start at 1. Non-seed nodes are labelled with their
//! id; seeds of the line, comb and star families are labelled `A`, `B`, ...

mod cdf;
mod families;
mod random;

pub use random::{random_instance, RandomSpec};

use crate::ctp::{SeedSet, SeedSets};
use crate::graph::{
    load_graph_files, write_edges_tsv, write_nodes_tsv, Edge, Graph, GraphBuilder, GraphError, Node, NodeId,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Chain { n: u64 },
    Line { m: u64, nl: u64 },
    Comb { na: u64, ns: u64, sl: u64, dba: u64 },
    Star { m: u64, sl: u64 },
    Cdf { m: u64, nt: u64, nl: u64, sl: u64, seed: u64 },
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Chain { .. } => "chain",
            GenSpec::Line { .. } => "line",
            GenSpec::Comb { .. } => "comb",
            GenSpec::Star { .. } => "star",
            GenSpec::Cdf { .. } => "cdf",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, u64> {
        let pairs: Vec<(&str, u64)> = match *self {
            GenSpec::Chain { n } => vec![("N", n)],
            GenSpec::Line { m, nl } => vec![("m", m), ("nL", nl)],
            GenSpec::Comb { na, ns, sl, dba } => vec![("nA", na), ("nS", ns), ("sL", sl), ("dBA", dba)],
            GenSpec::Star { m, sl } => vec![("m", m), ("sL", sl)],
            GenSpec::Cdf { m, nt, nl, sl, seed } => {
                vec![("m", m), ("NT", nt), ("NL", nl), ("SL", sl), ("seed", seed)]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Short name used in benchmark records, e.g. `star-6-2`.
    pub fn id(&self) -> String {
        let vals: Vec<String> = match *self {
            GenSpec::Chain { n } => vec![n.to_string()],
            GenSpec::Line { m, nl } => vec![m.to_string(), nl.to_string()],
            GenSpec::Comb { na, ns, sl, dba } => [na, ns, sl, dba].iter().map(u64::to_string).collect(),
            GenSpec::Star { m, sl } => vec![m.to_string(), sl.to_string()],
            GenSpec::Cdf { m, nt, nl, sl, seed } => [m, nt, nl, sl, seed].iter().map(u64::to_string).collect(),
        };
        format!("{}-{}", self.family(), vals.join("-"))
    }
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad workload manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

/// A generated graph with the CTP (seed sets) or EQL query run on it.
#[derive(Debug, Clone)]
pub struct Workload {
    pub manifest: Manifest,
    pub graph: Graph,
}

/// Contents of `workload.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub family: String,
    pub parameters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed_sets: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub query: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected_results: Option<u64>,
}

impl Manifest {
    /// The generator call that produced this manifest, if it is complete.
    pub fn spec(&self) -> Option<GenSpec> {
        let p = |k: &str| self.parameters.get(k).copied();
        Some(match self.family.as_str() {
            "chain" => GenSpec::Chain { n: p("N")? },
            "line" => GenSpec::Line { m: p("m")?, nl: p("nL")? },
            "comb" => GenSpec::Comb { na: p("nA")?, ns: p("nS")?, sl: p("sL")?, dba: p("dBA")? },
            "star" => GenSpec::Star { m: p("m")?, sl: p("sL")? },
            "cdf" => GenSpec::Cdf { m: p("m")?, nt: p("NT")?, nl: p("NL")?, sl: p("SL")?, seed: p("seed")? },
            _ => return None,
        })
    }
}

impl Workload {
    pub fn seed_sets(&self) -> Option<SeedSets> {
        self.manifest.seed_sets.as_ref().map(|sets| {
            SeedSets::new(
                sets.iter()
                    .map(|s| SeedSet::Nodes(s.iter().map(|&n| NodeId(n)).collect()))
                    .collect(),
            )
        })
    }

    /// Writes `nodes.tsv`, `edges.tsv` and `workload.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), SynthError> {
        fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join("nodes.tsv"))?);
        write_nodes_tsv(&self.graph, &mut w)?;
        w.flush()?;
        let mut w = BufWriter::new(File::create(dir.join("edges.tsv"))?);
        write_edges_tsv(&self.graph, &mut w)?;
        w.flush()?;
        let mut json = serde_json::to_string_pretty(&self.manifest)?;
        json.push('\n');
        fs::write(dir.join("workload.json"), json)?;
        Ok(())
    }

    pub fn read_from(dir: &Path) -> Result<Workload, SynthError> {
        let graph = load_graph_files(&dir.join("nodes.tsv"), &dir.join("edges.tsv"))?;
        let manifest = serde_json::from_str(&fs::read_to_string(dir.join("workload.json"))?)?;
        Ok(Workload { manifest, graph })
    }
}

pub fn generate(spec: &GenSpec) -> Result<Workload, SynthError> {
    let built = match *spec {
        GenSpec::Chain { n } => families::chain(n)?,
        GenSpec::Line { m, nl } => families::line(m, nl)?,
        GenSpec::Comb { na, ns, sl, dba } => families::comb(na, ns, sl, dba)?,
        GenSpec::Star { m, sl } => families::star(m, sl)?,
        GenSpec::Cdf { m, nt, nl, sl, seed } => cdf::cdf(m, nt, nl, sl, seed)?,
    };
    Ok(Workload {
        manifest: Manifest {
            family: spec.family().to_string(),
            parameters: spec.parameters(),
            seed_sets: built.seed_sets,
            query: built.query,
            expected_results: Some(built.expected),
        },
        graph: built.graph,
    })
}

pub(crate) struct Built {
    graph: Graph,
    seed_sets: Option<Vec<Vec<u64>>>,
    query: Option<String>,
    expected: u64,
}

/// Seed label for the i-th seed (0-based): A..Z, then S27, S28, ...
pub fn seed_label(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("S{}", i + 1)
    }
}

/// Builder that hands out consecutive node and edge ids.
pub(crate) struct Ids {
    b: GraphBuilder,
    next_node: u64,
    next_edge: u64,
}

impl Ids {
    pub fn new() -> Self {
        Ids {
            b: GraphBuilder::new(),
            next_node: 1,
            next_edge: 1,
        }
    }

    /// A node labelled with its own id.
    pub fn plain(&mut self) -> u64 {
        let id = self.next_node;
        self.labelled(&id.to_string())
    }

    pub fn labelled(&mut self, label: &str) -> u64 {
        let id = self.next_node;
        self.next_node += 1;
        self.b.add_node(Node::uri(id, label)).expect("fresh id");
        id
    }

    pub fn edge(&mut self, s: u64, label: &str, t: u64) -> u64 {
        let id = self.next_edge;
        self.next_edge += 1;
        self.b.add_edge(Edge::new(id, s, label, t)).expect("endpoints exist");
        id
    }

    pub fn build(self) -> Graph {
        self.b.build()
    }
}
