use std::collections::HashMap;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use super::data::{type_name, DataPath, DataRecordSet};
use super::eval::{eval_condition, EvalError};
use super::{Expr, MessageTemplate, NodeKind, SchemaDef, SchemaSet};
use crate::ir::{
    ComplementPhrase, Determiner, DocumentPlan, EntityId, EntityTable, Message, Number, PhraseHead,
    PhraseKind, PlanNode, Relation,
};

pub const DEFAULT_MAX_VISITS: usize = 32;

/// Source key given to messages whose template reads no data.
pub const LITERAL_SOURCE_KEY: &str = crate::ir::LITERAL_SOURCE_KEY;

const PREPOSITIONS: &[&str] = &[
    "about", "after", "at", "before", "by", "for", "from", "in", "into", "near", "of", "on",
    "over", "to", "under", "with", "without",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error("missing data path `{0}`")]
    MissingPath(DataPath),
    #[error("`{value}` is not a known entity id")]
    UnknownEntity { value: String },
    #[error("subject must be a string entity id, found {found}")]
    SubjectType { found: &'static str },
    #[error("cannot build a complement from {found}")]
    ComplementType { found: &'static str },
    #[error("malformed complement: {0}")]
    Complement(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraverseError {
    #[error("schema `{schema}`, node `{node}`: {source}")]
    Template {
        schema: String,
        node: String,
        #[source]
        source: Box<TemplateError>,
    },
    #[error("schema `{schema}`, arc {from} -> {to}: {source}")]
    Guard {
        schema: String,
        from: String,
        to: String,
        #[source]
        source: Box<EvalError>,
    },
    #[error(
        "schema `{schema}`, node `{node}` visited more than {limit} times (probable schema cycle)"
    )]
    VisitLimit {
        schema: String,
        node: String,
        limit: usize,
    },
    #[error("unresolved sub-schema `{0}`")]
    UnresolvedSchema(String),
    #[error("schema `{schema}` has no node `{node}`")]
    UnknownNode { schema: String, node: String },
}

fn format_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

/// Splits "to the hospital" / "high blood pressure" / "sam" into a phrase.
/// A bare entity id, optionally after a preposition, becomes an entity reference.
fn parse_phrase(text: &str, entities: &EntityTable) -> Result<ComplementPhrase, TemplateError> {
    let mut words: Vec<&str> = text.split_whitespace().collect();
    if words.is_empty() {
        return Err(TemplateError::Complement("empty complement".into()));
    }
    let mut preposition = None;
    if words.len() > 1 && PREPOSITIONS.contains(&words[0].to_lowercase().as_str()) {
        preposition = Some(words.remove(0).to_lowercase());
    }
    if words.len() == 1 && entities.contains(&EntityId::new(words[0])) {
        let object = ComplementPhrase::entity(words[0]);
        return Ok(match preposition {
            Some(p) => ComplementPhrase::prepositional(&p, object),
            None => object,
        });
    }
    let mut determiner = None;
    if words.len() > 1 {
        determiner = match words[0].to_lowercase().as_str() {
            "a" | "an" => Some(Determiner::A),
            "the" => Some(Determiner::The),
            _ => None,
        };
        if determiner.is_some() {
            words.remove(0);
        }
    }
    let head = words.pop().expect("at least one word remains").to_string();
    Ok(ComplementPhrase {
        kind: if preposition.is_some() {
            PhraseKind::PrepositionalPhrase
        } else {
            PhraseKind::NounPhrase
        },
        preposition,
        determiner,
        premodifiers: words.into_iter().map(str::to_string).collect(),
        head: PhraseHead::Noun(head),
        number: Number::Singular,
    })
}

/// Structured complement given as a JSON object in the data.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhraseValue {
    #[serde(default)]
    preposition: Option<String>,
    #[serde(default)]
    determiner: Option<Determiner>,
    #[serde(default)]
    premodifiers: Vec<String>,
    #[serde(default)]
    head: Option<String>,
    #[serde(default)]
    entity: Option<String>,
    #[serde(default)]
    number: Number,
}

fn structured_phrase(v: &Value, entities: &EntityTable) -> Result<ComplementPhrase, TemplateError> {
    let pv: PhraseValue =
        serde_json::from_value(v.clone()).map_err(|e| TemplateError::Complement(e.to_string()))?;
    let head = match (pv.head, pv.entity) {
        (Some(h), None) if !h.trim().is_empty() => PhraseHead::Noun(h),
        (None, Some(id)) => {
            let id = EntityId::new(id);
            if !entities.contains(&id) {
                return Err(TemplateError::UnknownEntity {
                    value: id.to_string(),
                });
            }
            PhraseHead::Entity(id)
        }
        _ => {
            return Err(TemplateError::Complement(
                "exactly one of `head` and `entity` is required".into(),
            ))
        }
    };
    let kind = match (&pv.preposition, &head) {
        (Some(_), _) => PhraseKind::PrepositionalPhrase,
        (None, PhraseHead::Entity(_)) => PhraseKind::EntityReference,
        (None, PhraseHead::Noun(_)) => PhraseKind::NounPhrase,
    };
    Ok(ComplementPhrase {
        kind,
        preposition: pv.preposition,
        determiner: pv.determiner,
        premodifiers: pv.premodifiers,
        head,
        number: pv.number,
    })
}

fn value_phrases(
    v: &Value,
    entities: &EntityTable,
    out: &mut Vec<ComplementPhrase>,
    nested: bool,
) -> Result<(), TemplateError> {
    match v {
        Value::String(s) => out.push(parse_phrase(s, entities)?),
        Value::Number(n) => {
            let text = format_number(n.as_f64().unwrap_or_default());
            out.push(ComplementPhrase::noun(None, &[], &text));
        }
        Value::Object(_) => out.push(structured_phrase(v, entities)?),
        Value::Array(items) if !nested => {
            for item in items {
                value_phrases(item, entities, out, true)?;
            }
        }
        other => {
            return Err(TemplateError::ComplementType {
                found: type_name(other),
            })
        }
    }
    Ok(())
}

fn resolve<'a>(data: &'a DataRecordSet, path: &DataPath) -> Result<&'a Value, TemplateError> {
    data.resolve(path)
        .ok_or_else(|| TemplateError::MissingPath(path.clone()))
}

fn first_record_key(t: &MessageTemplate) -> Option<String> {
    std::iter::once(&t.subject)
        .chain(&t.complements)
        .find_map(|e| match e {
            Expr::Path(p) => Some(p.record_key().to_string()),
            Expr::Literal(_) => None,
        })
}

/// Fills a message template from the data. The message's source key is the
/// record read by the first data path in the template; a template without
/// paths yields the same message for any data.
pub fn instantiate_template(
    t: &MessageTemplate,
    data: &DataRecordSet,
) -> Result<Message, TemplateError> {
    let subject = match &t.subject {
        Expr::Literal(s) => s.clone(),
        Expr::Path(p) => match resolve(data, p)? {
            Value::String(s) => s.clone(),
            other => {
                return Err(TemplateError::SubjectType {
                    found: type_name(other),
                })
            }
        },
    };
    let subject = EntityId::new(subject.trim());
    if !data.entities.contains(&subject) {
        return Err(TemplateError::UnknownEntity {
            value: subject.to_string(),
        });
    }

    let mut complements = Vec::new();
    for expr in &t.complements {
        match expr {
            Expr::Literal(s) => complements.push(parse_phrase(s, &data.entities)?),
            Expr::Path(p) => {
                value_phrases(resolve(data, p)?, &data.entities, &mut complements, false)?
            }
        }
    }

    Ok(Message {
        subject,
        verb: t.verb.clone(),
        adverbs: t.adverbs.clone(),
        complements,
        tense: t.tense,
        modal: t.modal,
        polarity: t.polarity,
        condition: None,
        source_key: first_record_key(t).unwrap_or_else(|| LITERAL_SOURCE_KEY.to_string()),
    })
}

/// Result of visiting one node. `chain` is set when the node is a relation
/// built by folding this node's outgoing arcs, which callers may splice into
/// an enclosing relation with the same label.
struct Visited {
    node: PlanNode,
    chain: Option<Relation>,
}

struct Traverser<'a> {
    schemas: &'a [&'a SchemaDef],
    data: &'a DataRecordSet,
    max_visits: usize,
    visits: HashMap<(&'a str, &'a str), usize>,
}

impl<'a> Traverser<'a> {
    fn schema(&self, name: &str) -> Result<&'a SchemaDef, TraverseError> {
        self.schemas
            .iter()
            .copied()
            .find(|s| s.name == name)
            .ok_or_else(|| TraverseError::UnresolvedSchema(name.to_string()))
    }

    fn run(&mut self, schema: &'a SchemaDef) -> Result<Option<PlanNode>, TraverseError> {
        Ok(self.visit(schema, &schema.entry)?.map(|v| v.node))
    }

    fn instantiate(
        &self,
        schema: &SchemaDef,
        node: &str,
        t: &MessageTemplate,
    ) -> Result<Message, TraverseError> {
        let wrap = |source| TraverseError::Template {
            schema: schema.name.clone(),
            node: node.to_string(),
            source: Box::new(source),
        };
        let mut message = instantiate_template(t, self.data).map_err(wrap)?;
        if let Some(cond_id) = &t.condition {
            let Some(NodeKind::Emit(ct)) = schema.node(cond_id).map(|n| &n.kind) else {
                return Err(TraverseError::UnknownNode {
                    schema: schema.name.clone(),
                    node: cond_id.clone(),
                });
            };
            let cond = instantiate_template(ct, self.data).map_err(wrap)?;
            if message.source_key == LITERAL_SOURCE_KEY {
                message.source_key = cond.source_key.clone();
            }
            message.condition = Some(Box::new(cond));
        }
        Ok(message)
    }

    fn visit(
        &mut self,
        schema: &'a SchemaDef,
        id: &'a str,
    ) -> Result<Option<Visited>, TraverseError> {
        let node = schema.node(id).ok_or_else(|| TraverseError::UnknownNode {
            schema: schema.name.clone(),
            node: id.to_string(),
        })?;
        let count = self.visits.entry((schema.name.as_str(), id)).or_insert(0);
        *count += 1;
        if *count > self.max_visits {
            return Err(TraverseError::VisitLimit {
                schema: schema.name.clone(),
                node: id.to_string(),
                limit: self.max_visits,
            });
        }

        let own = match &node.kind {
            NodeKind::Emit(t) => Some(PlanNode::leaf(self.instantiate(schema, id, t)?)),
            NodeKind::Call(name) => {
                let sub = self.schema(name)?;
                self.run(sub)?
            }
            NodeKind::End => None,
        };
        let mut acc = own.map(|node| Visited { node, chain: None });

        for arc in schema.arcs_from(id) {
            if let Some(guard) = &arc.guard {
                let taken =
                    eval_condition(guard, self.data).map_err(|source| TraverseError::Guard {
                        schema: schema.name.clone(),
                        from: arc.from.clone(),
                        to: arc.to.clone(),
                        source: Box::new(source),
                    })?;
                if !taken {
                    continue;
                }
            }
            let Some(next) = self.visit(schema, &arc.to)? else {
                continue;
            };
            acc = Some(match acc {
                None => next,
                Some(prev) => join(prev, arc.rel, next),
            });
        }
        Ok(acc)
    }
}

fn join(prev: Visited, label: Relation, next: Visited) -> Visited {
    let items = match next {
        Visited {
            node: PlanNode::Relation { children, .. },
            chain: Some(l),
        } if l == label => children,
        other => vec![other.node],
    };
    match prev {
        Visited {
            node:
                PlanNode::Relation {
                    label: l,
                    mut children,
                },
            chain: Some(c),
        } if c == label => {
            children.extend(items);
            Visited {
                node: PlanNode::Relation { label: l, children },
                chain: Some(c),
            }
        }
        other => {
            let mut children = vec![other.node];
            children.extend(items);
            Visited {
                node: PlanNode::relation(label, children),
                chain: Some(label),
            }
        }
    }
}

fn run_traversal(
    schemas: &[&SchemaDef],
    main: &SchemaDef,
    data: &DataRecordSet,
    max_visits: usize,
) -> Result<DocumentPlan, TraverseError> {
    let mut t = Traverser {
        schemas,
        data,
        max_visits,
        visits: HashMap::new(),
    };
    Ok(DocumentPlan { root: t.run(main)? })
}

/// Walks a single schema from its entry node. Any `call` fails with
/// [`TraverseError::UnresolvedSchema`] unless it calls the schema itself.
pub fn traverse(schema: &SchemaDef, data: &DataRecordSet) -> Result<DocumentPlan, TraverseError> {
    run_traversal(&[schema], schema, data, DEFAULT_MAX_VISITS)
}

/// Walks the main schema of a set; `call` nodes descend into sibling schemas.
/// Each node may be visited at most `max_visits` times per run.
pub fn traverse_set(
    set: &SchemaSet,
    data: &DataRecordSet,
    max_visits: usize,
) -> Result<DocumentPlan, TraverseError> {
    let schemas: Vec<&SchemaDef> = set.schemas.iter().collect();
    run_traversal(&schemas, set.main(), data, max_visits)
}
