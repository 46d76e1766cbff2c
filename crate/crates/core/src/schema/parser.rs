//! Parser for the line-oriented schema language.
//!
//! ```text
//! schema <name>
//! node <id> emit subject=<expr> verb=<lemma> [modal=<m>] [tense=<t>] complement=<expr>[, <expr>...]
//! node <id> call <schema-name>
//! node <id> end
//! arc <from> -> <to> [when <condition>] [rel <sequence|elaboration|contrast>]
//! ```
//!
//! `emit` additionally accepts `polarity=<positive|negative>`, `adverb=<word>`
//! (repeatable) and `if=<node-id>`, which names another emit node whose
//! message becomes the antecedent of a conditional.

use std::collections::HashSet;

use super::lexer::{lex_line, Tok, Token};
use super::{
    Arc, Condition, DataPath, Expr, Literal, MessageTemplate, NodeKind, SchemaDef, SchemaError,
    SchemaNode, SchemaSet,
};
use crate::ir::{Modal, Polarity, Relation, Tense};

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// Column just past the end of the line, for "unexpected end" errors.
    eol: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, message: impl Into<String>) -> SchemaError {
        let column = self.toks.get(self.pos).map_or(self.eol, |t| t.col);
        SchemaError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of line".to_string(), Tok::describe)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn ident(&mut self, what: &str) -> Result<String, SchemaError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(format!("expected {what}, found {}", self.found()))),
        }
    }

    /// An identifier without dots (node ids, schema names, lemmas).
    fn name(&mut self, what: &str) -> Result<String, SchemaError> {
        let save = self.pos;
        let s = self.ident(what)?;
        if s.contains('.') {
            self.pos = save;
            return Err(self.err(format!("{what} may not contain `.`")));
        }
        Ok(s)
    }

    fn punct(&mut self, want: Tok) -> Result<(), SchemaError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {}, found {}",
                want.describe(),
                self.found()
            )))
        }
    }

    fn end(&self) -> Result<(), SchemaError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected {}", self.found())))
        }
    }

    fn path(&mut self) -> Result<DataPath, SchemaError> {
        let save = self.pos;
        let text = match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Str(s)) => s.clone(),
            _ => return Err(self.err(format!("expected a data path, found {}", self.found()))),
        };
        self.pos += 1;
        DataPath::parse(&text).map_err(|_| {
            self.pos = save;
            self.err(format!("malformed data path `{text}`"))
        })
    }

    fn expr(&mut self) -> Result<Expr, SchemaError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Expr::Literal(s.clone()))
            }
            Some(Tok::Ident(s)) if s == "path" => {
                self.pos += 1;
                self.punct(Tok::LParen)?;
                let p = self.path()?;
                self.punct(Tok::RParen)?;
                Ok(Expr::Path(p))
            }
            _ => Err(self.err(format!(
                "expected a quoted literal or path(...), found {}",
                self.found()
            ))),
        }
    }

    fn literal(&mut self) -> Result<Literal, SchemaError> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Literal::Str(s.clone()))
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Literal::Num(*n))
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                self.pos += 1;
                Ok(Literal::Bool(s == "true"))
            }
            _ => Err(self.err(format!("expected a literal, found {}", self.found()))),
        }
    }

    fn number(&mut self) -> Result<f64, SchemaError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => Err(self.err(format!("expected a number, found {}", self.found()))),
        }
    }

    fn condition(&mut self) -> Result<Condition, SchemaError> {
        let op = self.ident("a condition")?;
        self.punct(Tok::LParen)?;
        let cond = match op.as_str() {
            "exists" => Condition::Exists(self.path()?),
            "eq" => {
                let p = self.path()?;
                self.punct(Tok::Comma)?;
                Condition::Eq(p, self.literal()?)
            }
            "gt" | "lt" => {
                let p = self.path()?;
                self.punct(Tok::Comma)?;
                let n = self.number()?;
                if op == "gt" {
                    Condition::Gt(p, n)
                } else {
                    Condition::Lt(p, n)
                }
            }
            "and" | "or" => {
                let mut items = vec![self.condition()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    items.push(self.condition()?);
                }
                if op == "and" {
                    Condition::And(items)
                } else {
                    Condition::Or(items)
                }
            }
            "not" => Condition::Not(Box::new(self.condition()?)),
            other => {
                self.pos -= 2;
                return Err(self.err(format!("unknown condition `{other}`")));
            }
        };
        self.punct(Tok::RParen)?;
        Ok(cond)
    }

    fn emit(&mut self) -> Result<MessageTemplate, SchemaError> {
        let mut subject = None;
        let mut verb = None;
        let mut modal: Option<Option<Modal>> = None;
        let mut tense = None;
        let mut polarity = None;
        let mut adverbs = Vec::new();
        let mut condition = None;
        let mut complements: Option<Vec<Expr>> = None;

        while !self.at_end() {
            let key_pos = self.pos;
            let key = self.name("an attribute name")?;
            self.punct(Tok::Eq)?;
            let dup = match key.as_str() {
                "subject" => subject.replace(self.expr()?).is_some(),
                "verb" => verb.replace(self.name("a verb lemma")?).is_some(),
                "modal" => {
                    let m = match self.name("a modal")?.as_str() {
                        "should" => Some(Modal::Should),
                        "must" => Some(Modal::Must),
                        "can" => Some(Modal::Can),
                        "none" => None,
                        other => {
                            self.pos -= 1;
                            return Err(self.err(format!("unknown modal `{other}`")));
                        }
                    };
                    modal.replace(m).is_some()
                }
                "tense" => {
                    let t = match self.name("a tense")?.as_str() {
                        "present" => Tense::Present,
                        "past" => Tense::Past,
                        "future" => Tense::Future,
                        other => {
                            self.pos -= 1;
                            return Err(self.err(format!("unknown tense `{other}`")));
                        }
                    };
                    tense.replace(t).is_some()
                }
                "polarity" => {
                    let p = match self.name("a polarity")?.as_str() {
                        "positive" => Polarity::Positive,
                        "negative" => Polarity::Negative,
                        other => {
                            self.pos -= 1;
                            return Err(self.err(format!("unknown polarity `{other}`")));
                        }
                    };
                    polarity.replace(p).is_some()
                }
                "adverb" => {
                    adverbs.push(self.name("an adverb")?);
                    false
                }
                "if" => condition.replace(self.name("a node id")?).is_some(),
                "complement" => {
                    let mut items = vec![self.expr()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        items.push(self.expr()?);
                    }
                    complements.replace(items).is_some()
                }
                other => {
                    self.pos = key_pos;
                    return Err(self.err(format!("unknown emit attribute `{other}`")));
                }
            };
            if dup {
                self.pos = key_pos;
                return Err(self.err(format!("duplicate attribute `{key}`")));
            }
        }

        let subject = subject.ok_or_else(|| self.err("emit node needs subject=<expr>"))?;
        let verb = verb.ok_or_else(|| self.err("emit node needs verb=<lemma>"))?;
        Ok(MessageTemplate {
            subject,
            verb,
            modal: modal.flatten(),
            tense: tense.unwrap_or_default(),
            polarity: polarity.unwrap_or_default(),
            adverbs,
            condition,
            complements: complements.unwrap_or_default(),
        })
    }
}

struct Pending {
    def: SchemaDef,
    header_line: usize,
    node_lines: Vec<usize>,
    arc_lines: Vec<usize>,
}

/// Parses every schema in `source` and checks each one's local invariants.
fn parse_units(source: &str) -> Result<Vec<Pending>, SchemaError> {
    let mut done: Vec<Pending> = Vec::new();
    let mut current: Option<Pending> = None;

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks: &toks,
            pos: 0,
            line,
            eol: raw.chars().count() + 1,
        };
        let Some(Tok::Ident(kw)) = p.peek() else {
            return Err(p.err(format!("expected a statement, found {}", p.found())));
        };
        let kw = kw.clone();

        if kw == "schema" {
            p.next();
            let name = p.name("a schema name")?;
            p.end()?;
            if let Some(c) = current.take() {
                done.push(c);
            }
            current = Some(Pending {
                def: SchemaDef {
                    name,
                    entry: String::new(),
                    nodes: Vec::new(),
                    arcs: Vec::new(),
                },
                header_line: line,
                node_lines: Vec::new(),
                arc_lines: Vec::new(),
            });
            continue;
        }

        let Some(cur) = current.as_mut() else {
            return Err(SchemaError::Syntax {
                line,
                column: 1,
                message: "expected schema header".into(),
            });
        };

        match kw.as_str() {
            "node" => {
                p.next();
                let id = p.name("a node id")?;
                let kind = match p.ident("`emit`, `call` or `end`")?.as_str() {
                    "emit" => NodeKind::Emit(p.emit()?),
                    "call" => {
                        let target = p.name("a schema name")?;
                        p.end()?;
                        NodeKind::Call(target)
                    }
                    "end" => {
                        p.end()?;
                        NodeKind::End
                    }
                    other => {
                        p.pos -= 1;
                        return Err(
                            p.err(format!("expected `emit`, `call` or `end`, found `{other}`"))
                        );
                    }
                };
                if cur.def.nodes.iter().any(|n| n.id == id) {
                    return Err(SchemaError::DuplicateNode { line, id });
                }
                if cur.def.nodes.is_empty() {
                    cur.def.entry = id.clone();
                }
                cur.def.nodes.push(SchemaNode { id, kind });
                cur.node_lines.push(line);
            }
            "arc" => {
                p.next();
                let from = p.name("a node id")?;
                p.punct(Tok::Arrow)?;
                let to = p.name("a node id")?;
                let mut guard = None;
                let mut rel = Relation::Sequence;
                if matches!(p.peek(), Some(Tok::Ident(s)) if s == "when") {
                    p.next();
                    guard = Some(p.condition()?);
                }
                if matches!(p.peek(), Some(Tok::Ident(s)) if s == "rel") {
                    p.next();
                    let label = p.name("a relation label")?;
                    rel = Relation::parse(&label).ok_or_else(|| {
                        p.pos -= 1;
                        p.err(format!(
                            "unknown relation `{label}` (expected sequence, elaboration or contrast)"
                        ))
                    })?;
                }
                p.end()?;
                cur.def.arcs.push(Arc {
                    from,
                    to,
                    guard,
                    rel,
                });
                cur.arc_lines.push(line);
            }
            _ => return Err(p.err(format!("expected `schema`, `node` or `arc`, found `{kw}`"))),
        }
    }

    if let Some(c) = current.take() {
        done.push(c);
    }
    if done.is_empty() {
        return Err(SchemaError::Syntax {
            line: source.lines().count().max(1),
            column: 1,
            message: "expected schema header".into(),
        });
    }

    let mut names = HashSet::new();
    for p in &done {
        if !names.insert(p.def.name.clone()) {
            return Err(SchemaError::DuplicateSchema {
                line: p.header_line,
                name: p.def.name.clone(),
            });
        }
        check_def(p)?;
    }
    Ok(done)
}

/// Parses a schema file that may hold several schemas. The first schema is the
/// main one; `call` targets must resolve within the file.
pub fn parse_schema_set(source: &str) -> Result<SchemaSet, SchemaError> {
    let units = parse_units(source)?;
    let names: HashSet<&str> = units.iter().map(|p| p.def.name.as_str()).collect();
    for p in &units {
        for (node, line) in p.def.nodes.iter().zip(&p.node_lines) {
            if let NodeKind::Call(target) = &node.kind {
                if !names.contains(target.as_str()) {
                    return Err(SchemaError::UnresolvedCall {
                        line: *line,
                        schema: target.clone(),
                    });
                }
            }
        }
    }
    Ok(SchemaSet {
        schemas: units.into_iter().map(|p| p.def).collect(),
    })
}

/// Parses a file holding exactly one schema. `call` targets are resolved at
/// traversal time.
pub fn parse_schema(source: &str) -> Result<SchemaDef, SchemaError> {
    let mut units = parse_units(source)?;
    if units.len() != 1 {
        return Err(SchemaError::Syntax {
            line: units[1].header_line,
            column: 1,
            message: format!("expected exactly one schema, found {}", units.len()),
        });
    }
    Ok(units.remove(0).def)
}

fn check_def(p: &Pending) -> Result<(), SchemaError> {
    let def = &p.def;
    if def.nodes.is_empty() {
        return Err(SchemaError::EmptySchema {
            line: p.header_line,
            name: def.name.clone(),
        });
    }
    let mut unguarded: HashSet<&str> = HashSet::new();
    for (arc, &line) in def.arcs.iter().zip(&p.arc_lines) {
        for end in [&arc.from, &arc.to] {
            if def.node(end).is_none() {
                return Err(SchemaError::UnresolvedEndpoint {
                    line,
                    id: end.clone(),
                });
            }
        }
        if matches!(def.node(&arc.from).map(|n| &n.kind), Some(NodeKind::End)) {
            return Err(SchemaError::EndHasArcs {
                line,
                node: arc.from.clone(),
            });
        }
        if arc.guard.is_none() && !unguarded.insert(arc.from.as_str()) {
            return Err(SchemaError::MultipleUnguardedArcs {
                line,
                node: arc.from.clone(),
            });
        }
    }
    for (node, &line) in def.nodes.iter().zip(&p.node_lines) {
        let NodeKind::Emit(t) = &node.kind else {
            continue;
        };
        let Some(cond_id) = &t.condition else {
            continue;
        };
        let ok = matches!(
            def.node(cond_id).map(|n| &n.kind),
            Some(NodeKind::Emit(c)) if c.condition.is_none()
        );
        if !ok {
            return Err(SchemaError::BadConditionNode {
                line,
                node: node.id.clone(),
                target: cond_id.clone(),
            });
        }
    }
    Ok(())
}
