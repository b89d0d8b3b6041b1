//! Abstract syntax of EQL queries.

use std::collections::BTreeSet;
use std::fmt;

/// A query variable. User variables are written `?name`; variables
/// introduced by desugaring a bare string term start with `$` so they can
/// never collide with user names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Hidden variables come from label shorthand and never surface in
    /// result tables.
    pub fn is_hidden(&self) -> bool {
        self.0.starts_with('$')
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Label,
    Type,
    Id,
}

impl Property {
    pub fn keyword(self) -> &'static str {
        match self {
            Property::Label => "label",
            Property::Type => "type",
            Property::Id => "id",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Lt,
    Le,
    /// Glob match where `*` stands for any substring.
    Match,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Match => "~",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constant {
    Str(String),
    Int(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub property: Property,
    pub op: CompareOp,
    pub constant: Constant,
}

impl Condition {
    pub fn new(property: Property, op: CompareOp, constant: Constant) -> Self {
        Condition {
            property,
            op,
            constant,
        }
    }

    pub fn label_eq(label: impl Into<String>) -> Self {
        Condition::new(Property::Label, CompareOp::Eq, Constant::Str(label.into()))
    }
}

/// A conjunction of conditions over a single variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub variable: Var,
    pub conditions: Vec<Condition>,
}

impl Predicate {
    pub fn var(name: impl Into<String>) -> Self {
        Predicate {
            variable: Var::new(name),
            conditions: Vec::new(),
        }
    }

    pub fn with(variable: Var, conditions: Vec<Condition>) -> Self {
        Predicate {
            variable,
            conditions,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// The label a shorthand term stands for, when this predicate came from one.
    pub fn shorthand_label(&self) -> Option<&str> {
        if !self.variable.is_hidden() || self.conditions.len() != 1 {
            return None;
        }
        match &self.conditions[0] {
            Condition {
                property: Property::Label,
                op: CompareOp::Eq,
                constant: Constant::Str(s),
            } => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePattern {
    pub source: Predicate,
    pub edge: Predicate,
    pub target: Predicate,
}

impl EdgePattern {
    pub fn new(source: Predicate, edge: Predicate, target: Predicate) -> Self {
        EdgePattern {
            source,
            edge,
            target,
        }
    }

    pub fn vars(&self) -> [&Var; 3] {
        [&self.source.variable, &self.edge.variable, &self.target.variable]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bgp {
    pub patterns: Vec<EdgePattern>,
}

impl Bgp {
    pub fn vars(&self) -> BTreeSet<&Var> {
        self.patterns.iter().flat_map(|p| p.vars()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CtpFilters {
    pub uni: bool,
    pub labels: Option<BTreeSet<String>>,
    pub max_edges: Option<u64>,
    pub score: Option<String>,
    pub top_k: Option<u64>,
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ctp {
    pub members: Vec<Predicate>,
    pub tree_var: Var,
    pub filters: CtpFilters,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryAst {
    pub head: Vec<Var>,
    pub bgps: Vec<Bgp>,
    pub ctps: Vec<Ctp>,
}
