use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::full_reference_text;
use super::orthography::orthography;
use super::tokens::TokenStream;
use crate::ir::{EntityId, EntityTable, IrError};
use crate::lexicon::Lexicon;

pub const DEFAULT_TEMPLATES: &str = include_str!("../../data/templates.txt");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("template `{template}` declares slot `{slot}` twice")]
    DuplicateSlot { template: String, slot: String },
    #[error("template `{0}` is defined twice")]
    DuplicateTemplate(String),
    #[error("template `{template}`: no value for slot `{slot}`")]
    MissingSlot { template: String, slot: String },
    #[error("template `{template}`: slot `{slot}` expects {expected}, got {found}")]
    KindMismatch {
        template: String,
        slot: String,
        expected: SlotKind,
        found: &'static str,
    },
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error("reading templates {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Raw,
    Entity,
    Number,
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotKind::Raw => "raw",
            SlotKind::Entity => "entity",
            SlotKind::Number => "number",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Literal(String),
    Slot { name: String, kind: SlotKind },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SlotValue {
    Text(String),
    Number(f64),
    Entity(EntityId),
}

impl SlotValue {
    fn kind_name(&self) -> &'static str {
        match self {
            SlotValue::Text(_) => "text",
            SlotValue::Number(_) => "a number",
            SlotValue::Entity(_) => "an entity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub body: Vec<Segment>,
}

fn format_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

impl Template {
    /// Parses a body such as `Report signed by {subject:entity} on {complement}.`
    /// `line` is used in error positions.
    pub fn parse(name: &str, body: &str, line: usize) -> Result<Self, TemplateError> {
        let err = |message: String| TemplateError::Parse { line, message };
        let mut segments = Vec::new();
        let mut rest = body;
        while let Some(open) = rest.find(['{', '}']) {
            if rest[open..].starts_with('}') {
                return Err(err("unmatched `}`".into()));
            }
            if open > 0 {
                segments.push(Segment::Literal(rest[..open].to_string()));
            }
            let close = rest[open..]
                .find('}')
                .map(|i| open + i)
                .ok_or_else(|| err("unterminated slot".into()))?;
            let spec = &rest[open + 1..close];
            let (slot, kind) = match spec.split_once(':') {
                Some((n, k)) => (n.trim(), k.trim()),
                None => (spec.trim(), "raw"),
            };
            if slot.is_empty() || !slot.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(format!("bad slot name `{slot}`")));
            }
            let kind = match kind {
                "raw" => SlotKind::Raw,
                "entity" => SlotKind::Entity,
                "number" => SlotKind::Number,
                other => return Err(err(format!("unknown slot kind `{other}`"))),
            };
            if segments
                .iter()
                .any(|s| matches!(s, Segment::Slot { name, .. } if name == slot))
            {
                return Err(TemplateError::DuplicateSlot {
                    template: name.to_string(),
                    slot: slot.to_string(),
                });
            }
            segments.push(Segment::Slot {
                name: slot.to_string(),
                kind,
            });
            rest = &rest[close + 1..];
        }
        if !rest.is_empty() {
            segments.push(Segment::Literal(rest.to_string()));
        }
        Ok(Template {
            name: name.to_string(),
            body: segments,
        })
    }

    pub fn slots(&self) -> impl Iterator<Item = (&str, SlotKind)> {
        self.body.iter().filter_map(|s| match s {
            Segment::Slot { name, kind } => Some((name.as_str(), *kind)),
            Segment::Literal(_) => None,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateSet {
    templates: BTreeMap<String, Template>,
}

impl TemplateSet {
    pub fn embedded() -> Self {
        Self::parse(DEFAULT_TEMPLATES).expect("embedded templates are valid")
    }

    pub fn load(path: &Path) -> Result<Self, TemplateError> {
        let text = std::fs::read_to_string(path).map_err(|e| TemplateError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Blocks start with `template <name>`; following non-blank lines are the
    /// body, joined with single spaces. `#` lines between blocks are comments.
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut set = TemplateSet::default();
        let mut current: Option<(String, usize, Vec<&str>)> = None;
        let finish = |block: Option<(String, usize, Vec<&str>)>, set: &mut TemplateSet| {
            if let Some((name, line, body)) = block {
                if body.is_empty() {
                    return Err(TemplateError::Parse {
                        line,
                        message: format!("template `{name}` has no body"),
                    });
                }
                let t = Template::parse(&name, &body.join(" "), line)?;
                if set.templates.insert(name.clone(), t).is_some() {
                    return Err(TemplateError::DuplicateTemplate(name));
                }
            }
            Ok(())
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                finish(current.take(), &mut set)?;
                continue;
            }
            match &mut current {
                Some((_, _, body)) => body.push(line),
                None if line.starts_with('#') => {}
                None => {
                    let name = line
                        .strip_prefix("template")
                        .filter(|r| r.starts_with(char::is_whitespace))
                        .map(str::trim)
                        .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
                        .ok_or_else(|| TemplateError::Parse {
                            line: i + 1,
                            message: "expected `template <name>`".into(),
                        })?;
                    current = Some((name.to_string(), i + 1, Vec::new()));
                }
            }
        }
        finish(current.take(), &mut set)?;
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Option<&Template> {
        self.templates.get(name)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Fills the template's slots and normalizes the result with the orthography
/// pass. Values for slots the template lacks are ignored.
pub fn realize_template(
    t: &Template,
    slots: &BTreeMap<String, SlotValue>,
    entities: &EntityTable,
    lex: &Lexicon,
) -> Result<String, TemplateError> {
    let mut text = String::new();
    for seg in &t.body {
        match seg {
            Segment::Literal(s) => text.push_str(s),
            Segment::Slot { name, kind } => {
                let value = slots.get(name).ok_or_else(|| TemplateError::MissingSlot {
                    template: t.name.clone(),
                    slot: name.clone(),
                })?;
                let rendered = match (kind, value) {
                    (SlotKind::Raw, SlotValue::Text(s)) => s.clone(),
                    (SlotKind::Raw | SlotKind::Number, SlotValue::Number(n)) => format_number(*n),
                    (SlotKind::Raw | SlotKind::Entity, SlotValue::Entity(id)) => {
                        full_reference_text(entities.lookup(id)?, lex)
                    }
                    (kind, v) => {
                        return Err(TemplateError::KindMismatch {
                            template: t.name.clone(),
                            slot: name.clone(),
                            expected: *kind,
                            found: v.kind_name(),
                        })
                    }
                };
                text.push_str(&rendered);
            }
        }
    }
    Ok(orthography(&TokenStream::from_text(&text), lex))
}
