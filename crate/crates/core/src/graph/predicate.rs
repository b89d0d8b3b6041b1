use super::{Element, Graph, GraphError};
use crate::eql::ast::{CompareOp, Condition, Constant, Predicate, Property};
use std::cmp::Ordering;

/// Glob matching where `*` matches any (possibly empty) substring and every
/// other character matches itself.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0, 0);
    // Position of the last `*` seen and the text index it was tried against.
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

fn constant_text(c: &Constant) -> String {
    match c {
        Constant::Str(s) => s.clone(),
        Constant::Int(i) => i.to_string(),
    }
}

fn compare_text(value: &str, op: CompareOp, c: &Constant) -> bool {
    let c = constant_text(c);
    match op {
        CompareOp::Eq => value == c,
        CompareOp::Lt => value < c.as_str(),
        CompareOp::Le => value <= c.as_str(),
        CompareOp::Match => glob_match(&c, value),
    }
}

fn compare_id(value: u64, op: CompareOp, c: &Constant) -> bool {
    if op == CompareOp::Match {
        return glob_match(&constant_text(c), &value.to_string());
    }
    let ord = match c {
        Constant::Int(i) => (value as i128).cmp(&(*i as i128)),
        Constant::Str(s) => match s.parse::<u64>() {
            Ok(v) => value.cmp(&v),
            Err(_) => return false,
        },
    };
    match op {
        CompareOp::Eq => ord == Ordering::Equal,
        CompareOp::Lt => ord == Ordering::Less,
        _ => ord != Ordering::Greater,
    }
}

fn holds(cond: &Condition, g: &Graph, elem: Element) -> Result<bool, GraphError> {
    match elem {
        Element::Node(id) => {
            let n = g.node(id).ok_or(GraphError::UnknownNode(id.0))?;
            Ok(match cond.property {
                Property::Label => compare_text(&n.label, cond.op, &cond.constant),
                Property::Type => n.types.iter().any(|t| compare_text(t, cond.op, &cond.constant)),
                Property::Id => compare_id(id.0, cond.op, &cond.constant),
            })
        }
        Element::Edge(id) => {
            let e = g.edge(id).ok_or(GraphError::UnknownEdge(id.0))?;
            match cond.property {
                Property::Label => Ok(compare_text(&e.label, cond.op, &cond.constant)),
                Property::Type => Err(GraphError::TypeOnEdge(id.0)),
                Property::Id => Ok(compare_id(id.0, cond.op, &cond.constant)),
            }
        }
    }
}

/// Whether `elem` satisfies every condition of `p`. The empty predicate is
/// always satisfied.
pub fn satisfies(p: &Predicate, g: &Graph, elem: Element) -> Result<bool, GraphError> {
    if let Element::Edge(e) = elem {
        if p.conditions.iter().any(|c| c.property == Property::Type) {
            return Err(GraphError::TypeOnEdge(e.0));
        }
    }
    for c in &p.conditions {
        if !holds(c, g, elem)? {
            return Ok(false);
        }
    }
    Ok(true)
}
