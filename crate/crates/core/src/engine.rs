//! Whole-query evaluation: BGP tables, then seed sets, then one tree search
//! per CTP, then a natural join of everything projected on the head.

use crate::bgp::{evaluate_bgp, natural_join, project, BgpError, BindingTable, ColumnKind};
use crate::ctp::{run_search_with, ResultTree, ScoreRegistry, SearchConfig, SearchError, SearchStats, SeedSet, SeedSets};
use crate::eql::ast::{Ctp, Var};
use crate::eql::ValidatedQuery;
use crate::graph::{satisfies, EdgeId, Element, Graph, GraphError, NodeId};
use serde_json::{json, Value as Json};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

/// Environment variable read when neither the query nor the caller gives a
/// timeout.
pub const DEFAULT_TIMEOUT_ENV: &str = "CTP_DEFAULT_TIMEOUT_MS";

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Bgp(#[from] BgpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("connecting tree pattern #{ctp}: {source}")]
    Search {
        ctp: usize,
        #[source]
        source: SearchError,
    },
    #[error("member {0} of a connecting tree pattern is bound to edges, not nodes")]
    EdgeSeed(Var),
}

/// One cell of a query answer.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Node(NodeId),
    Edge(EdgeId),
    Tree(ResultTree),
}

/// What one CTP search did, for reporting and benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct CtpReport {
    /// Seed set sizes in member order; `None` for universal sets.
    pub seed_set_sizes: Vec<Option<usize>>,
    /// Raw results before the join; zero when the search was skipped.
    pub results: usize,
    pub stats: SearchStats,
    /// True when an empty seed set made the search unnecessary.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub columns: Vec<Var>,
    /// Duplicate-free, in ascending order of the underlying ids.
    pub rows: Vec<Vec<Value>>,
    /// Some search stopped on its timeout or budget.
    pub partial: bool,
    pub ctps: Vec<CtpReport>,
}

fn env_timeout() -> Option<u64> {
    std::env::var(DEFAULT_TIMEOUT_ENV).ok()?.trim().parse().ok()
}

/// One table per (merged) BGP of the query, in query order.
pub fn bgp_tables(g: &Graph, q: &ValidatedQuery) -> Result<Vec<BindingTable>, EngineError> {
    Ok(q.ast.bgps.iter().map(|b| evaluate_bgp(g, b)).collect::<Result<Vec<_>, _>>()?)
}

/// Seed sets of every CTP, given the tables of the (merged) BGPs.
pub fn compute_seed_sets(
    g: &Graph,
    q: &ValidatedQuery,
    bgp_tables: &[BindingTable],
) -> Result<Vec<SeedSets>, EngineError> {
    q.ast
        .ctps
        .iter()
        .map(|ctp| {
            let sets = ctp
                .members
                .iter()
                .map(|p| {
                    let bound = q.bgp_of(&p.variable).map(|i| &bgp_tables[i]);
                    let candidates: Vec<NodeId> = match bound {
                        Some(t) => {
                            if t.kind_of(&p.variable) == Some(ColumnKind::Edge) {
                                return Err(EngineError::EdgeSeed(p.variable.clone()));
                            }
                            t.node_values(&p.variable)?
                        }
                        None if p.is_empty() => return Ok(SeedSet::Universal),
                        None => g.nodes().iter().map(|n| n.id).collect(),
                    };
                    let mut set = BTreeSet::new();
                    for n in candidates {
                        if p.is_empty() || satisfies(p, g, Element::Node(n))? {
                            set.insert(n);
                        }
                    }
                    Ok(SeedSet::Nodes(set))
                })
                .collect::<Result<Vec<_>, EngineError>>()?;
            Ok(SeedSets::new(sets))
        })
        .collect()
}

/// Table over (members ++ tree variable). Tree cells index into `store`.
fn ctp_table(ctp: &Ctp, results: Vec<ResultTree>, store: &mut Vec<ResultTree>) -> BindingTable {
    let mut columns: Vec<(Var, ColumnKind)> = ctp.members.iter().map(|p| (p.variable.clone(), ColumnKind::Node)).collect();
    columns.push((ctp.tree_var.clone(), ColumnKind::Tree));
    let rows = results
        .into_iter()
        .map(|r| {
            let mut row: Vec<u64> = r.seeds.iter().map(|n| n.0).collect();
            row.push(store.len() as u64);
            store.push(r);
            row
        })
        .collect();
    BindingTable::new(columns, rows)
}

fn empty_table(ctp: &Ctp) -> BindingTable {
    ctp_table(ctp, Vec::new(), &mut Vec::new())
}

/// Evaluates a validated query. `defaults` supplies the algorithm, queue
/// policy, budget and fallback timeout; each CTP's own filters are pushed
/// into its search.
pub fn evaluate_query(g: &Graph, q: &ValidatedQuery, defaults: &SearchConfig) -> Result<QueryResult, EngineError> {
    evaluate_query_with(g, q, defaults, &ScoreRegistry::default())
}

pub fn evaluate_query_with(
    g: &Graph,
    q: &ValidatedQuery,
    defaults: &SearchConfig,
    scores: &ScoreRegistry,
) -> Result<QueryResult, EngineError> {
    let bgp_tables = bgp_tables(g, q)?;
    let seed_sets = compute_seed_sets(g, q, &bgp_tables)?;
    let fallback = defaults.timeout_ms.or_else(env_timeout);

    let mut store: Vec<ResultTree> = Vec::new();
    let mut tables = bgp_tables;
    let mut reports = Vec::new();
    let mut partial = false;
    for (k, (ctp, seeds)) in q.ast.ctps.iter().zip(&seed_sets).enumerate() {
        let seed_set_sizes: Vec<Option<usize>> = seeds
            .sets()
            .iter()
            .map(|s| match s {
                SeedSet::Universal => None,
                SeedSet::Nodes(ns) => Some(ns.len()),
            })
            .collect();
        if seed_set_sizes.contains(&Some(0)) {
            reports.push(CtpReport {
                seed_set_sizes,
                results: 0,
                stats: SearchStats::default(),
                skipped: true,
            });
            tables.push(empty_table(ctp));
            continue;
        }
        let mut cfg = defaults.clone().with_filters(ctp.filters.clone());
        cfg.timeout_ms = fallback;
        let outcome = run_search_with(g, seeds, &cfg, scores).map_err(|source| EngineError::Search { ctp: k, source })?;
        partial |= outcome.partial();
        reports.push(CtpReport {
            seed_set_sizes,
            results: outcome.results.len(),
            stats: outcome.stats,
            skipped: false,
        });
        tables.push(ctp_table(ctp, outcome.results, &mut store));
    }

    // Smallest tables first keeps intermediate results down.
    tables.sort_by_key(BindingTable::len);
    let mut acc = BindingTable::unit();
    while !tables.is_empty() {
        let pick = tables
            .iter()
            .position(|t| t.columns().iter().any(|c| acc.column_index(c).is_some()))
            .unwrap_or(0);
        acc = natural_join(&acc, &tables.remove(pick))?;
    }
    let head = &q.ast.head;
    let out = if acc.is_empty() {
        BindingTable::new(Vec::new(), Vec::new())
    } else {
        project(&acc, head)?
    };
    let rows = out
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .zip(out.kinds())
                .map(|(&v, kind)| match kind {
                    ColumnKind::Node => Value::Node(NodeId(v)),
                    ColumnKind::Edge => Value::Edge(EdgeId(v)),
                    ColumnKind::Tree => Value::Tree(store[v as usize].clone()),
                })
                .collect()
        })
        .collect();
    Ok(QueryResult {
        columns: head.clone(),
        rows,
        partial,
        ctps: reports,
    })
}

fn tree_json(t: &ResultTree) -> Json {
    let mut o = json!({
        "edges": t.edges.iter().map(|e| e.0).collect::<Vec<_>>(),
        "nodes": t.nodes.iter().map(|n| n.0).collect::<Vec<_>>(),
    });
    if let Some(r) = t.root {
        o["root"] = json!(r.0);
    }
    if let Some(s) = t.score {
        o["score"] = json!(s);
    }
    o
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Node(n) => json!(n.0),
        Value::Edge(e) => json!(e.0),
        Value::Tree(t) => tree_json(t),
    }
}

impl QueryResult {
    /// `{"columns": [...], "rows": [[...]], "partial": bool}`.
    pub fn to_json(&self) -> Json {
        json!({
            "columns": self.columns.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(|r| r.iter().map(value_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "partial": self.partial,
        })
    }

    /// Header line of column names, then one line per row. Tree cells are
    /// written as compact JSON objects.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let header: Vec<String> = self.columns.iter().map(|v| v.to_string()).collect();
        s.push_str(&header.join("\t"));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Node(n) => n.0.to_string(),
                    Value::Edge(e) => e.0.to_string(),
                    Value::Tree(t) => tree_json(t).to_string(),
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join("\t"));
        }
        s
    }
}
