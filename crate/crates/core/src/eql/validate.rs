use super::ast::*;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("query body is empty")]
    EmptyBody,
    #[error("head variable {0} listed twice")]
    DuplicateHeadVariable(Var),
    #[error("BGP #{0} has no edge patterns")]
    EmptyBgp(usize),
    #[error("edge pattern {0} repeats a variable")]
    PatternVariablesNotDistinct(String),
    #[error("BGP #{0} is not connected: some pattern shares no variable with the others")]
    BgpNotConnected(usize),
    #[error("connecting tree pattern #{0} has no member terms")]
    CtpWithoutMembers(usize),
    #[error("connecting tree pattern #{ctp} uses variable {var} more than once")]
    CtpVariablesNotDistinct { ctp: usize, var: Var },
    #[error("tree variable {0} appears more than once in the query")]
    TreeVariableReused(Var),
    #[error("invalid condition on {var}: {reason}")]
    InvalidCondition { var: Var, reason: String },
    #[error("{filter} must be positive in connecting tree pattern #{ctp}")]
    NonPositiveFilter { ctp: usize, filter: &'static str },
    #[error("TOP without SCORE in connecting tree pattern #{0}")]
    TopWithoutScore(usize),
    #[error("head variable {0} does not occur in the body")]
    HeadVariableUnbound(Var),
}

/// Where a variable occurs in a validated query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Occurrence {
    BgpSource { bgp: usize, pattern: usize },
    BgpEdge { bgp: usize, pattern: usize },
    BgpTarget { bgp: usize, pattern: usize },
    CtpMember { ctp: usize, index: usize },
    CtpTree { ctp: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedQuery {
    /// The query with BGPs sharing variables merged together.
    pub ast: QueryAst,
    pub occurrences: BTreeMap<Var, Vec<Occurrence>>,
}

impl ValidatedQuery {
    /// Index of the BGP binding `v`, if any. After merging there is at most one.
    pub fn bgp_of(&self, v: &Var) -> Option<usize> {
        self.occurrences.get(v)?.iter().find_map(|o| match *o {
            Occurrence::BgpSource { bgp, .. }
            | Occurrence::BgpEdge { bgp, .. }
            | Occurrence::BgpTarget { bgp, .. } => Some(bgp),
            _ => None,
        })
    }
}

fn check_condition(var: &Var, c: &Condition, on_edge: bool) -> Result<(), ValidationError> {
    let bad = |reason: &str| {
        Err(ValidationError::InvalidCondition {
            var: var.clone(),
            reason: reason.to_string(),
        })
    };
    if on_edge && c.property == Property::Type {
        return bad("edges carry no types");
    }
    if c.op == CompareOp::Match && c.property != Property::Label {
        return bad("`~` applies to labels only");
    }
    match (c.property, &c.constant) {
        (Property::Id, Constant::Str(_)) => bad("ids compare with integer constants"),
        (Property::Label | Property::Type, Constant::Int(_)) => {
            bad("labels and types compare with string constants")
        }
        _ => Ok(()),
    }
}

fn check_predicate(p: &Predicate, on_edge: bool) -> Result<(), ValidationError> {
    p.conditions
        .iter()
        .try_for_each(|c| check_condition(&p.variable, c, on_edge))
}

fn connected(patterns: &[EdgePattern]) -> bool {
    if patterns.len() <= 1 {
        return true;
    }
    let mut reached = vec![false; patterns.len()];
    reached[0] = true;
    let mut vars: BTreeSet<&Var> = patterns[0].vars().into_iter().collect();
    let mut changed = true;
    while changed {
        changed = false;
        for (i, p) in patterns.iter().enumerate() {
            if !reached[i] && p.vars().iter().any(|v| vars.contains(v)) {
                reached[i] = true;
                vars.extend(p.vars());
                changed = true;
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Groups BGPs that share a variable, keeping first-occurrence order.
fn merge_bgps(bgps: Vec<Bgp>) -> Vec<Bgp> {
    let mut groups: Vec<(BTreeSet<Var>, Vec<EdgePattern>)> = Vec::new();
    for b in bgps {
        let vars: BTreeSet<Var> = b.vars().into_iter().cloned().collect();
        let mut merged = (vars, b.patterns);
        let mut i = 0;
        let mut first_hit: Option<usize> = None;
        while i < groups.len() {
            if !groups[i].0.is_disjoint(&merged.0) {
                let (gv, gp) = groups.remove(i);
                let (mv, mp) = merged;
                let mut pats = gp;
                pats.extend(mp);
                merged = (gv.union(&mv).cloned().collect(), pats);
                first_hit.get_or_insert(i);
            } else {
                i += 1;
            }
        }
        let at = first_hit.unwrap_or(groups.len());
        groups.insert(at, merged);
    }
    groups
        .into_iter()
        .map(|(_, patterns)| Bgp { patterns })
        .collect()
}

/// Checks the structural rules of a query and returns it annotated with
/// variable occurrences. Checks run in a fixed order and the first failure is
/// reported.
pub fn validate_query(q: &QueryAst) -> Result<ValidatedQuery, ValidationError> {
    let mut head_seen = BTreeSet::new();
    for v in &q.head {
        if !head_seen.insert(v) {
            return Err(ValidationError::DuplicateHeadVariable(v.clone()));
        }
    }
    if q.bgps.is_empty() && q.ctps.is_empty() {
        return Err(ValidationError::EmptyBody);
    }
    for (i, b) in q.bgps.iter().enumerate() {
        if b.patterns.is_empty() {
            return Err(ValidationError::EmptyBgp(i));
        }
        for p in &b.patterns {
            let [s, e, t] = p.vars();
            if s == e || s == t || e == t {
                return Err(ValidationError::PatternVariablesNotDistinct(p.to_string()));
            }
            check_predicate(&p.source, false)?;
            check_predicate(&p.edge, true)?;
            check_predicate(&p.target, false)?;
        }
        if !connected(&b.patterns) {
            return Err(ValidationError::BgpNotConnected(i));
        }
    }
    for (i, c) in q.ctps.iter().enumerate() {
        if c.members.is_empty() {
            return Err(ValidationError::CtpWithoutMembers(i));
        }
        let mut seen = BTreeSet::new();
        for v in c.members.iter().map(|m| &m.variable).chain([&c.tree_var]) {
            if !seen.insert(v) {
                return Err(ValidationError::CtpVariablesNotDistinct {
                    ctp: i,
                    var: v.clone(),
                });
            }
        }
        for m in &c.members {
            check_predicate(m, false)?;
        }
        let f = &c.filters;
        for (name, value) in [("MAX", f.max_edges), ("TOP", f.top_k), ("TIMEOUT", f.timeout_ms)] {
            if value == Some(0) {
                return Err(ValidationError::NonPositiveFilter { ctp: i, filter: name });
            }
        }
        if f.top_k.is_some() && f.score.is_none() {
            return Err(ValidationError::TopWithoutScore(i));
        }
    }

    let merged = QueryAst {
        head: q.head.clone(),
        bgps: merge_bgps(q.bgps.clone()),
        ctps: q.ctps.clone(),
    };
    let mut occurrences: BTreeMap<Var, Vec<Occurrence>> = BTreeMap::new();
    for (bi, b) in merged.bgps.iter().enumerate() {
        for (pi, p) in b.patterns.iter().enumerate() {
            let at = |v: &Var, o| (v.clone(), o);
            for (v, o) in [
                at(&p.source.variable, Occurrence::BgpSource { bgp: bi, pattern: pi }),
                at(&p.edge.variable, Occurrence::BgpEdge { bgp: bi, pattern: pi }),
                at(&p.target.variable, Occurrence::BgpTarget { bgp: bi, pattern: pi }),
            ] {
                occurrences.entry(v).or_default().push(o);
            }
        }
    }
    for (ci, c) in merged.ctps.iter().enumerate() {
        for (mi, m) in c.members.iter().enumerate() {
            occurrences
                .entry(m.variable.clone())
                .or_default()
                .push(Occurrence::CtpMember { ctp: ci, index: mi });
        }
        occurrences
            .entry(c.tree_var.clone())
            .or_default()
            .push(Occurrence::CtpTree { ctp: ci });
    }
    for c in &merged.ctps {
        if occurrences[&c.tree_var].len() > 1 {
            return Err(ValidationError::TreeVariableReused(c.tree_var.clone()));
        }
    }
    for v in &q.head {
        if !occurrences.contains_key(v) {
            return Err(ValidationError::HeadVariableUnbound(v.clone()));
        }
    }
    Ok(ValidatedQuery {
        ast: merged,
        occurrences,
    })
}
