//! Schema-driven content determination and text planning.
//!
//! A schema is a transition network: nodes select content (each `emit` node
//! instantiates one message from the input data), arcs carry guards over the
//! data and the rhetorical relation that joins what lies on either side.
//! [`traverse`] walks the network depth-first and returns a [`DocumentPlan`].
//!
//! [`DocumentPlan`]: crate::ir::DocumentPlan

mod data;
mod eval;
mod lexer;
mod parser;
mod traverse;

use std::fmt;

use thiserror::Error;

pub use data::{DataError, DataPath, DataRecordSet};
pub use eval::{eval_condition, EvalError};
pub use parser::{parse_schema, parse_schema_set};
pub use traverse::{
    instantiate_template, traverse, traverse_set, TemplateError, TraverseError, DEFAULT_MAX_VISITS,
};

use crate::ir::{Modal, Polarity, Relation, Tense};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemaError {
    #[error("line {line}, column {column}: {message}")]
    Lexical {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate node id `{id}`")]
    DuplicateNode { line: usize, id: String },
    #[error("line {line}: arc endpoint `{id}` is not a declared node")]
    UnresolvedEndpoint { line: usize, id: String },
    #[error("line {line}: node `{node}` has more than one unguarded arc")]
    MultipleUnguardedArcs { line: usize, node: String },
    #[error("line {line}: end node `{node}` cannot have outgoing arcs")]
    EndHasArcs { line: usize, node: String },
    #[error("line {line}: duplicate schema `{name}`")]
    DuplicateSchema { line: usize, name: String },
    #[error("line {line}: schema `{name}` declares no nodes")]
    EmptySchema { line: usize, name: String },
    #[error("line {line}: call to unknown schema `{schema}`")]
    UnresolvedCall { line: usize, schema: String },
    #[error("line {line}: node `{node}` uses if={target}, which must be an emit node without its own condition")]
    BadConditionNode {
        line: usize,
        node: String,
        target: String,
    },
}

/// A template value: a quoted literal or a data path.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(String),
    Path(DataPath),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Str(String),
    Num(f64),
    Bool(bool),
}

/// Arc guard.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    Exists(DataPath),
    Eq(DataPath, Literal),
    Gt(DataPath, f64),
    Lt(DataPath, f64),
    And(Vec<Condition>),
    Or(Vec<Condition>),
    Not(Box<Condition>),
}

/// A message skeleton whose fields may read from the input data.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageTemplate {
    pub subject: Expr,
    pub verb: String,
    pub modal: Option<Modal>,
    pub tense: Tense,
    pub polarity: Polarity,
    pub adverbs: Vec<String>,
    /// Id of an emit node whose message is the antecedent ("If ...").
    pub condition: Option<String>,
    pub complements: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Emit(MessageTemplate),
    Call(String),
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaNode {
    pub id: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub from: String,
    pub to: String,
    pub guard: Option<Condition>,
    pub rel: Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaDef {
    pub name: String,
    /// The first declared node.
    pub entry: String,
    pub nodes: Vec<SchemaNode>,
    pub arcs: Vec<Arc>,
}

impl SchemaDef {
    pub fn node(&self, id: &str) -> Option<&SchemaNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Outgoing arcs of `id` in declaration order.
    pub fn arcs_from<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Arc> + 'a {
        self.arcs.iter().filter(move |a| a.from == id)
    }
}

/// The schemas of one file; the first is the main schema.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaSet {
    pub schemas: Vec<SchemaDef>,
}

impl SchemaSet {
    pub fn main(&self) -> &SchemaDef {
        &self.schemas[0]
    }

    pub fn get(&self, name: &str) -> Option<&SchemaDef> {
        self.schemas.iter().find(|s| s.name == name)
    }
}

impl From<SchemaDef> for SchemaSet {
    fn from(def: SchemaDef) -> Self {
        SchemaSet { schemas: vec![def] }
    }
}

// Canonical printing. Parsing the printed form yields a structurally equal value.

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(s) => f.write_str(&quote(s)),
            Expr::Path(p) => write!(f, "path({p})"),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Str(s) => f.write_str(&quote(s)),
            Literal::Num(n) => write!(f, "{n}"),
            Literal::Bool(b) => write!(f, "{b}"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Condition]) -> fmt::Result {
    for (i, c) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Exists(p) => write!(f, "exists({p})"),
            Condition::Eq(p, l) => write!(f, "eq({p}, {l})"),
            Condition::Gt(p, n) => write!(f, "gt({p}, {n})"),
            Condition::Lt(p, n) => write!(f, "lt({p}, {n})"),
            Condition::And(items) => {
                f.write_str("and(")?;
                write_list(f, items)?;
                f.write_str(")")
            }
            Condition::Or(items) => {
                f.write_str("or(")?;
                write_list(f, items)?;
                f.write_str(")")
            }
            Condition::Not(c) => write!(f, "not({c})"),
        }
    }
}

impl fmt::Display for MessageTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "subject={} verb={}", self.subject, self.verb)?;
        if let Some(m) = self.modal {
            write!(f, " modal={}", m.as_str())?;
        }
        match self.tense {
            Tense::Present => {}
            Tense::Past => f.write_str(" tense=past")?,
            Tense::Future => f.write_str(" tense=future")?,
        }
        if self.polarity == Polarity::Negative {
            f.write_str(" polarity=negative")?;
        }
        for a in &self.adverbs {
            write!(f, " adverb={a}")?;
        }
        if let Some(c) = &self.condition {
            write!(f, " if={c}")?;
        }
        if !self.complements.is_empty() {
            f.write_str(" complement=")?;
            for (i, c) in self.complements.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SchemaDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schema {}", self.name)?;
        for n in &self.nodes {
            match &n.kind {
                NodeKind::Emit(t) => writeln!(f, "node {} emit {t}", n.id)?,
                NodeKind::Call(s) => writeln!(f, "node {} call {s}", n.id)?,
                NodeKind::End => writeln!(f, "node {} end", n.id)?,
            }
        }
        for a in &self.arcs {
            write!(f, "arc {} -> {}", a.from, a.to)?;
            if let Some(g) = &a.guard {
                write!(f, " when {g}")?;
            }
            if a.rel != Relation::Sequence {
                write!(f, " rel {}", a.rel.as_str())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for SchemaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.schemas.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REPORT: &str = r#"
# Ward report.
schema report
node start emit subject=path(visit.doctor) verb=see tense=past adverb=just complement=path(visit.patient)
node bp emit subject=path(visit.patient) verb=have complement="high blood pressure"
node plan emit subject=path(visit.patient) verb=go modal=should complement="to the store" if=hosp
node hosp emit subject=path(visit.patient) verb=go complement="to the hospital"
node done end
arc start -> bp when and(exists(visit.bp), gt(visit.bp.systolic, 140))
arc start -> plan when not(eq(visit.status, "discharged")) rel elaboration
arc plan -> done
"#;

    #[test]
    fn parses_nodes_arcs_and_entry() {
        let s = parse_schema(REPORT).unwrap();
        assert_eq!(s.name, "report");
        assert_eq!(s.entry, "start");
        assert_eq!(s.nodes.len(), 5);
        assert_eq!(s.arcs.len(), 3);
        assert_eq!(s.arcs[1].rel, Relation::Elaboration);
        let NodeKind::Emit(t) = &s.node("plan").unwrap().kind else {
            panic!()
        };
        assert_eq!(t.modal, Some(Modal::Should));
        assert_eq!(t.condition.as_deref(), Some("hosp"));
    }

    #[test]
    fn print_then_parse_is_identity() {
        let s = parse_schema(REPORT).unwrap();
        let printed = s.to_string();
        assert_eq!(parse_schema(&printed).unwrap(), s);
        assert_eq!(parse_schema(&printed).unwrap().to_string(), printed);
    }

    #[test]
    fn empty_file_needs_header() {
        for src in ["", "# only a comment\n\n"] {
            match parse_schema(src) {
                Err(SchemaError::Syntax { message, .. }) => {
                    assert_eq!(message, "expected schema header")
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(matches!(
            parse_schema("node a end\n"),
            Err(SchemaError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn unresolved_arc_endpoint_is_named() {
        let err = parse_schema("schema s\nnode a end\narc a -> x\n").unwrap_err();
        // `a` is an end node, but the endpoint check runs first.
        assert_eq!(
            err,
            SchemaError::UnresolvedEndpoint {
                line: 3,
                id: "x".into()
            }
        );
        assert!(err.to_string().contains("`x`"));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_schema("schema s\nnode a end\nnode a end\n"),
            Err(SchemaError::DuplicateNode { line: 3, .. })
        ));
        assert!(matches!(
            parse_schema(
                "schema s\nnode a call t\nnode b end\nnode c end\narc a -> b\narc a -> c\n"
            ),
            Err(SchemaError::MultipleUnguardedArcs { line: 6, .. })
        ));
        assert!(matches!(
            parse_schema("schema s\nnode a end\nnode b end\narc a -> b\n"),
            Err(SchemaError::EndHasArcs { .. })
        ));
        assert!(matches!(
            parse_schema_set("schema s\nnode a call nowhere\n"),
            Err(SchemaError::UnresolvedCall { line: 2, .. })
        ));
        assert!(matches!(
            parse_schema("schema s\nnode a emit subject=\"x\" verb=go if=b\nnode b end\n"),
            Err(SchemaError::BadConditionNode { .. })
        ));
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let err = parse_schema("schema s\nnode a emit subject=x verb=go\n").unwrap_err();
        assert_eq!(
            err,
            SchemaError::Syntax {
                line: 2,
                column: 21,
                message: "expected a quoted literal or path(...), found `x`".into()
            }
        );
        let err = parse_schema("schema s\nnode a end\narc a -> a when bogus(x)\n").unwrap_err();
        assert!(
            matches!(
                err,
                SchemaError::Syntax {
                    line: 3,
                    column: 17,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_schema("schema s\nnode a emit verb=go\n").unwrap_err();
        assert!(err.to_string().contains("subject"));
    }

    #[test]
    fn guarded_arcs_may_share_a_source() {
        let s = parse_schema(
            "schema s\nnode a emit subject=\"x\" verb=go\nnode b end\narc a -> b when exists(p)\narc a -> b\n",
        )
        .unwrap();
        assert_eq!(s.arcs_from("a").count(), 2);
    }
}
