use super::ast::*;
use super::lexer::{tokenize, Spanned, Tok};
use super::ParseError;
use std::collections::{BTreeSet, HashMap};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    hidden: usize,
}

enum Item {
    Pattern(EdgePattern),
    Ctp(Ctp),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Var(v))
            }
            other => Err(self.error_here(format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == kw)
    }

    fn query(&mut self) -> Result<QueryAst, ParseError> {
        self.expect(Tok::LParen)?;
        let mut head = Vec::new();
        if *self.peek() != Tok::RParen {
            head.push(self.var()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                head.push(self.var()?);
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Turnstile)?;
        let mut bgps = Vec::new();
        let mut ctps = Vec::new();
        loop {
            match self.item()? {
                Item::Pattern(p) => bgps.push(Bgp { patterns: vec![p] }),
                Item::Ctp(c) => ctps.push(c),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        if *self.peek() != Tok::Eof {
            return Err(self.error_here(format!(
                "expected `,` or end of query, found {}",
                self.peek().describe()
            )));
        }
        Ok(QueryAst { head, bgps, ctps })
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        if *self.peek() == Tok::Eof {
            return Err(self.error_here("expected an edge pattern or connecting tree pattern"));
        }
        self.expect(Tok::LParen)?;
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    if self.is_keyword("TREE") {
                        self.bump();
                        let tree_var = self.var()?;
                        self.expect(Tok::RParen)?;
                        let filters = self.filters()?;
                        return Ok(Item::Ctp(Ctp {
                            members: terms,
                            tree_var,
                            filters,
                        }));
                    }
                    terms.push(self.term()?);
                }
                Tok::RParen => {
                    if terms.len() != 3 {
                        return Err(self.error_here(format!(
                            "an edge pattern has exactly three terms, found {}; \
                             a connecting tree pattern ends with `TREE ?var`",
                            terms.len()
                        )));
                    }
                    self.bump();
                    if let Tok::Ident(w) = self.peek() {
                        return Err(self.error_here(format!(
                            "filter `{w}` may only follow a connecting tree pattern"
                        )));
                    }
                    let target = terms.pop().unwrap();
                    let edge = terms.pop().unwrap();
                    let source = terms.pop().unwrap();
                    return Ok(Item::Pattern(EdgePattern::new(source, edge, target)));
                }
                other => {
                    return Err(self.error_here(format!(
                        "expected `,` or `)`, found {}",
                        other.describe()
                    )))
                }
            }
        }
    }

    fn term(&mut self) -> Result<Predicate, ParseError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                self.hidden += 1;
                Ok(Predicate::with(
                    Var(format!("${}", self.hidden)),
                    vec![Condition::label_eq(s)],
                ))
            }
            Tok::Var(v) => {
                self.bump();
                let mut conditions = Vec::new();
                if *self.peek() == Tok::LBracket {
                    self.bump();
                    conditions.push(self.condition()?);
                    while *self.peek() == Tok::Semi {
                        self.bump();
                        conditions.push(self.condition()?);
                    }
                    self.expect(Tok::RBracket)?;
                }
                Ok(Predicate::with(Var(v), conditions))
            }
            other => Err(self.error_here(format!(
                "expected a variable or string, found {}",
                other.describe()
            ))),
        }
    }

    fn condition(&mut self) -> Result<Condition, ParseError> {
        let property = match self.peek() {
            Tok::Ident(w) if w == "label" => Property::Label,
            Tok::Ident(w) if w == "type" => Property::Type,
            Tok::Ident(w) if w == "id" => Property::Id,
            other => {
                return Err(self.error_here(format!(
                    "unknown property {}; expected label, type or id",
                    other.describe()
                )))
            }
        };
        self.bump();
        let op = match self.peek() {
            Tok::Eq => CompareOp::Eq,
            Tok::Lt => CompareOp::Lt,
            Tok::Le => CompareOp::Le,
            Tok::Tilde => CompareOp::Match,
            other => {
                return Err(self.error_here(format!(
                    "unknown operator {}; expected =, <, <= or ~",
                    other.describe()
                )))
            }
        };
        self.bump();
        let constant = match self.peek().clone() {
            Tok::Str(s) => Constant::Str(s),
            Tok::Int(i) => Constant::Int(i),
            other => {
                return Err(self.error_here(format!(
                    "expected a string or integer constant, found {}",
                    other.describe()
                )))
            }
        };
        self.bump();
        Ok(Condition::new(property, op, constant))
    }

    fn int(&mut self, filter: &str) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Int(i) if *i >= 0 => {
                let i = *i as u64;
                self.bump();
                Ok(i)
            }
            other => Err(self.error_here(format!(
                "{filter} expects a non-negative integer, found {}",
                other.describe()
            ))),
        }
    }

    fn filters(&mut self) -> Result<CtpFilters, ParseError> {
        let mut f = CtpFilters::default();
        let mut seen = BTreeSet::new();
        while let Tok::Ident(w) = self.peek().clone() {
            if !seen.insert(w.clone()) {
                return Err(self.error_here(format!("duplicate filter `{w}`")));
            }
            self.bump();
            match w.as_str() {
                "UNI" => f.uni = true,
                "LABEL" => {
                    self.expect(Tok::LParen)?;
                    let mut labels = BTreeSet::new();
                    loop {
                        match self.bump() {
                            Tok::Str(s) => {
                                labels.insert(s);
                            }
                            _ => {
                                self.pos -= 1;
                                return Err(self.error_here("LABEL expects string literals"));
                            }
                        }
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                    f.labels = Some(labels);
                }
                "MAX" => f.max_edges = Some(self.int("MAX")?),
                "TOP" => f.top_k = Some(self.int("TOP")?),
                "TIMEOUT" => f.timeout_ms = Some(self.int("TIMEOUT")?),
                "SCORE" => match self.bump() {
                    Tok::Ident(name) => f.score = Some(name),
                    _ => {
                        self.pos -= 1;
                        return Err(self.error_here("SCORE expects a function name"));
                    }
                },
                other => {
                    self.pos -= 1;
                    return Err(self.error_here(format!("unknown filter keyword `{other}`")));
                }
            }
        }
        Ok(f)
    }
}

/// Renames shorthand variables to `$1, $2, ...` in BGP-then-CTP order, the
/// order the printer emits them in.
fn canonicalize_hidden(q: &mut QueryAst) {
    let mut map: HashMap<String, String> = HashMap::new();
    let mut next = 0;
    let mut rename = |p: &mut Predicate| {
        if p.variable.is_hidden() {
            next += 1;
            let fresh = format!("${next}");
            map.insert(p.variable.0.clone(), fresh.clone());
            p.variable = Var(fresh);
        }
    };
    for b in &mut q.bgps {
        for p in &mut b.patterns {
            rename(&mut p.source);
            rename(&mut p.edge);
            rename(&mut p.target);
        }
    }
    for c in &mut q.ctps {
        for m in &mut c.members {
            rename(m);
        }
    }
}

pub fn parse_query(text: &str) -> Result<QueryAst, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        hidden: 0,
    };
    let mut q = p.query()?;
    canonicalize_hidden(&mut q);
    Ok(q)
}
