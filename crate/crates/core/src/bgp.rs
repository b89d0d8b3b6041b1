//! Binding tables and conjunctive evaluation of basic graph patterns.

use crate::eql::ast::{Bgp, EdgePattern, Var};
use crate::graph::{satisfies, EdgeId, Element, Graph, GraphError, NodeId};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// What the values of a column refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnKind {
    Node,
    Edge,
    /// An index into a list of result trees kept alongside the table.
    Tree,
}

#[derive(Debug, Error)]
pub enum BgpError {
    #[error("variable {var} is bound to a {left:?} on one side and a {right:?} on the other")]
    KindMismatch {
        var: Var,
        left: ColumnKind,
        right: ColumnKind,
    },
    #[error("unknown column {0}")]
    UnknownColumn(Var),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A duplicate-free relation over typed columns. Rows are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingTable {
    columns: Vec<Var>,
    kinds: Vec<ColumnKind>,
    rows: Vec<Vec<u64>>,
}

impl BindingTable {
    pub fn new(columns: Vec<(Var, ColumnKind)>, rows: Vec<Vec<u64>>) -> Self {
        let (columns, kinds) = columns.into_iter().unzip();
        let mut t = BindingTable {
            columns,
            kinds,
            rows,
        };
        t.normalize();
        t
    }

    /// The table with no columns and a single empty row: the join identity.
    pub fn unit() -> Self {
        BindingTable::new(Vec::new(), vec![Vec::new()])
    }

    fn normalize(&mut self) {
        debug_assert!(self.rows.iter().all(|r| r.len() == self.columns.len()));
        self.rows.sort_unstable();
        self.rows.dedup();
    }

    pub fn columns(&self) -> &[Var] {
        &self.columns
    }

    pub fn kinds(&self) -> &[ColumnKind] {
        &self.kinds
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, v: &Var) -> Option<usize> {
        self.columns.iter().position(|c| c == v)
    }

    pub fn kind_of(&self, v: &Var) -> Option<ColumnKind> {
        self.column_index(v).map(|i| self.kinds[i])
    }

    /// Distinct values of one column.
    pub fn values(&self, v: &Var) -> Result<BTreeSet<u64>, BgpError> {
        let i = self
            .column_index(v)
            .ok_or_else(|| BgpError::UnknownColumn(v.clone()))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Rows for every edge of `g` matching the pattern in its stored direction.
pub fn match_edge_pattern(g: &Graph, p: &EdgePattern) -> Result<BindingTable, BgpError> {
    let mut rows = Vec::new();
    for e in g.edges() {
        if satisfies(&p.edge, g, Element::Edge(e.id))?
            && satisfies(&p.source, g, Element::Node(e.source))?
            && satisfies(&p.target, g, Element::Node(e.target))?
        {
            rows.push(vec![e.source.0, e.id.0, e.target.0]);
        }
    }
    Ok(BindingTable::new(
        vec![
            (p.source.variable.clone(), ColumnKind::Node),
            (p.edge.variable.clone(), ColumnKind::Edge),
            (p.target.variable.clone(), ColumnKind::Node),
        ],
        rows,
    ))
}

pub fn natural_join(a: &BindingTable, b: &BindingTable) -> Result<BindingTable, BgpError> {
    let mut shared = Vec::new();
    for (bi, v) in b.columns.iter().enumerate() {
        if let Some(ai) = a.column_index(v) {
            if a.kinds[ai] != b.kinds[bi] {
                return Err(BgpError::KindMismatch {
                    var: v.clone(),
                    left: a.kinds[ai],
                    right: b.kinds[bi],
                });
            }
            shared.push((ai, bi));
        }
    }
    let b_extra: Vec<usize> = (0..b.columns.len())
        .filter(|bi| !shared.iter().any(|&(_, s)| s == *bi))
        .collect();

    let mut index: HashMap<Vec<u64>, Vec<&Vec<u64>>> = HashMap::new();
    for r in &b.rows {
        let key = shared.iter().map(|&(_, bi)| r[bi]).collect();
        index.entry(key).or_default().push(r);
    }
    let mut rows = Vec::new();
    for ra in &a.rows {
        let key: Vec<u64> = shared.iter().map(|&(ai, _)| ra[ai]).collect();
        if let Some(matches) = index.get(&key) {
            for rb in matches {
                let mut row = ra.clone();
                row.extend(b_extra.iter().map(|&bi| rb[bi]));
                rows.push(row);
            }
        }
    }
    let mut columns: Vec<(Var, ColumnKind)> = a
        .columns
        .iter()
        .cloned()
        .zip(a.kinds.iter().copied())
        .collect();
    columns.extend(b_extra.iter().map(|&bi| (b.columns[bi].clone(), b.kinds[bi])));
    Ok(BindingTable::new(columns, rows))
}

pub fn project(t: &BindingTable, vars: &[Var]) -> Result<BindingTable, BgpError> {
    let idx = vars
        .iter()
        .map(|v| t.column_index(v).ok_or_else(|| BgpError::UnknownColumn(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = t
        .rows
        .iter()
        .map(|r| idx.iter().map(|&i| r[i]).collect())
        .collect();
    let columns = idx
        .iter()
        .map(|&i| (t.columns[i].clone(), t.kinds[i]))
        .collect();
    Ok(BindingTable::new(columns, rows))
}

/// All embeddings of a BGP, restricted to its visible variables.
///
/// Per-pattern tables are joined left-deep, cheapest first, preferring at
/// each step a table that shares a column with what has been joined so far.
pub fn evaluate_bgp(g: &Graph, b: &Bgp) -> Result<BindingTable, BgpError> {
    let mut pending = b
        .patterns
        .iter()
        .map(|p| match_edge_pattern(g, p))
        .collect::<Result<Vec<_>, _>>()?;
    pending.sort_by_key(BindingTable::len);
    let mut acc = BindingTable::unit();
    let mut first = true;
    while !pending.is_empty() {
        let pick = if first {
            0
        } else {
            pending
                .iter()
                .position(|t| t.columns.iter().any(|c| acc.column_index(c).is_some()))
                .unwrap_or(0)
        };
        first = false;
        let next = pending.remove(pick);
        acc = natural_join(&acc, &next)?;
        if acc.is_empty() {
            break;
        }
    }
    let mut visible: Vec<Var> = Vec::new();
    for p in &b.patterns {
        for v in p.vars() {
            if !v.is_hidden() && !visible.contains(v) {
                visible.push(v.clone());
            }
        }
    }
    if acc.is_empty() {
        let columns = visible
            .iter()
            .map(|v| {
                let kind = b
                    .patterns
                    .iter()
                    .find_map(|p| (&p.edge.variable == v).then_some(ColumnKind::Edge))
                    .unwrap_or(ColumnKind::Node);
                (v.clone(), kind)
            })
            .collect();
        return Ok(BindingTable::new(columns, Vec::new()));
    }
    project(&acc, &visible)
}

/// Convenience accessors for tests and callers working with typed ids.
impl BindingTable {
    pub fn node_values(&self, v: &Var) -> Result<Vec<NodeId>, BgpError> {
        Ok(self.values(v)?.into_iter().map(NodeId).collect())
    }

    pub fn edge_values(&self, v: &Var) -> Result<Vec<EdgeId>, BgpError> {
        Ok(self.values(v)?.into_iter().map(EdgeId).collect())
    }
}
