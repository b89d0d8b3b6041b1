//! Canonical textual rendering. Printing a parsed query and parsing the
//! output yields the same AST.

use super::ast::*;
use std::fmt::{self, Display, Formatter, Write};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl Display for Constant {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Str(s) => f.write_str(&quote(s)),
            Constant::Int(i) => write!(f, "{i}"),
        }
    }
}

impl Display for Condition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.property.keyword(), self.op.symbol(), self.constant)
    }
}

impl Display for Predicate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Some(label) = self.shorthand_label() {
            return f.write_str(&quote(label));
        }
        write!(f, "{}", self.variable)?;
        if !self.conditions.is_empty() {
            f.write_char('[')?;
            for (i, c) in self.conditions.iter().enumerate() {
                if i > 0 {
                    f.write_str("; ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_char(']')?;
        }
        Ok(())
    }
}

impl Display for EdgePattern {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.edge, self.target)
    }
}

impl Display for CtpFilters {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.uni {
            f.write_str(" UNI")?;
        }
        if let Some(labels) = &self.labels {
            let parts: Vec<String> = labels.iter().map(|l| quote(l)).collect();
            write!(f, " LABEL({})", parts.join(", "))?;
        }
        if let Some(n) = self.max_edges {
            write!(f, " MAX {n}")?;
        }
        if let Some(s) = &self.score {
            write!(f, " SCORE {s}")?;
        }
        if let Some(k) = self.top_k {
            write!(f, " TOP {k}")?;
        }
        if let Some(t) = self.timeout_ms {
            write!(f, " TIMEOUT {t}")?;
        }
        Ok(())
    }
}

impl Display for Ctp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_char('(')?;
        for m in &self.members {
            write!(f, "{m}, ")?;
        }
        write!(f, "TREE {}){}", self.tree_var, self.filters)
    }
}

impl Display for QueryAst {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(|v| v.to_string()).collect();
        write!(f, "({}) :- ", head.join(", "))?;
        let mut items: Vec<String> = Vec::new();
        for b in &self.bgps {
            items.extend(b.patterns.iter().map(|p| p.to_string()));
        }
        items.extend(self.ctps.iter().map(|c| c.to_string()));
        f.write_str(&items.join(", "))
    }
}
