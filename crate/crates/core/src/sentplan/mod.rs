//! Sentence planning: split a document plan into sentences and paragraphs,
//! aggregate messages, insert discourse markers and choose referring
//! expressions. No pass changes the proposition set of its input.

mod aggregate;
mod markers;
mod reference;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ir::{
    validate, ClauseSpec, DocumentPlan, EntityTable, IrError, Message, PlanNode, SentencePlan,
    TerminalPunct, Violation,
};

pub use aggregate::{aggregate, DEFAULT_MAX_CONJUNCTS};
pub use markers::{insert_discourse_markers, MarkerRule, MARKER_RULES};
pub use reference::pronominalize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SentplanError {
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error("invalid document plan: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidPlan(Vec<Violation>),
}

/// How much sentence planning to do.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Profile {
    /// Aggregation, discourse markers and pronouns.
    #[default]
    Fluent,
    /// One sentence per message, full references, no markers.
    Plain,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Fluent => "fluent",
            Profile::Plain => "plain",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fluent" => Ok(Profile::Fluent),
            "plain" => Ok(Profile::Plain),
            other => Err(format!(
                "unknown profile `{other}` (expected fluent or plain)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentplanConfig {
    /// Most conjuncts one aggregated clause may hold.
    pub max_conjuncts: usize,
}

impl Default for SentplanConfig {
    fn default() -> Self {
        SentplanConfig {
            max_conjuncts: DEFAULT_MAX_CONJUNCTS,
        }
    }
}

/// Groups leaves into paragraphs. Each child of the root relation that is
/// itself a relation forms its own paragraph; runs of adjacent leaf children
/// share one.
pub fn paragraphs(plan: &DocumentPlan) -> Vec<Vec<&Message>> {
    let mut out: Vec<Vec<&Message>> = Vec::new();
    match &plan.root {
        None => {}
        Some(PlanNode::Leaf { message }) => out.push(vec![message]),
        Some(PlanNode::Relation { children, .. }) => {
            let mut run: Vec<&Message> = Vec::new();
            for child in children {
                match child {
                    PlanNode::Leaf { message } => run.push(message),
                    PlanNode::Relation { .. } => {
                        if !run.is_empty() {
                            out.push(std::mem::take(&mut run));
                        }
                        let group = collect_leaves(child);
                        if !group.is_empty() {
                            out.push(group);
                        }
                    }
                }
            }
            if !run.is_empty() {
                out.push(run);
            }
        }
    }
    out
}

fn collect_leaves(node: &PlanNode) -> Vec<&Message> {
    match node {
        PlanNode::Leaf { message } => vec![message],
        PlanNode::Relation { children, .. } => children.iter().flat_map(collect_leaves).collect(),
    }
}

fn sentence(clause: ClauseSpec, paragraph: usize) -> SentencePlan {
    SentencePlan {
        clauses: vec![clause],
        terminal: TerminalPunct::Period,
        paragraph,
    }
}

pub fn plan_sentences(
    plan: &DocumentPlan,
    entities: &EntityTable,
    profile: Profile,
) -> Result<Vec<SentencePlan>, SentplanError> {
    plan_sentences_with(plan, entities, profile, &SentplanConfig::default())
}

/// Plain: one full-reference sentence per leaf. Fluent: aggregate within each
/// paragraph, then insert markers, then pronominalize.
pub fn plan_sentences_with(
    plan: &DocumentPlan,
    entities: &EntityTable,
    profile: Profile,
    config: &SentplanConfig,
) -> Result<Vec<SentencePlan>, SentplanError> {
    let violations = validate(plan, entities, None);
    if !violations.is_empty() {
        return Err(SentplanError::InvalidPlan(violations));
    }
    let mut sentences = Vec::new();
    for (p, messages) in paragraphs(plan).into_iter().enumerate() {
        match profile {
            Profile::Plain => {
                for m in messages {
                    sentences.push(sentence(ClauseSpec::from_message(m, entities)?, p));
                }
            }
            Profile::Fluent => {
                for clause in aggregate(&messages, entities, config.max_conjuncts)? {
                    sentences.push(sentence(clause, p));
                }
            }
        }
    }
    if profile == Profile::Fluent {
        sentences = insert_discourse_markers(sentences);
        sentences = pronominalize(sentences, entities)?;
    }
    Ok(sentences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{proposition_set, ComplementPhrase, Entity, Gender, Relation};

    fn entities() -> EntityTable {
        [Entity::named("sam", "Sam", Gender::Masculine)]
            .into_iter()
            .collect()
    }

    fn have(adj: &str, noun: &str) -> PlanNode {
        PlanNode::leaf(
            Message::new("sam", "have", "patient").with_complement(ComplementPhrase::noun(
                None,
                &[adj, "blood"],
                noun,
            )),
        )
    }

    fn sam_plan() -> DocumentPlan {
        DocumentPlan::new(PlanNode::relation(
            Relation::Sequence,
            vec![have("high", "pressure"), have("low", "sugar")],
        ))
    }

    #[test]
    fn fluent_aggregates_plain_does_not() {
        let e = entities();
        let fluent = plan_sentences(&sam_plan(), &e, Profile::Fluent).unwrap();
        assert_eq!(fluent.len(), 1);
        assert_eq!(fluent[0].clauses[0].complements.len(), 2);
        let plain = plan_sentences(&sam_plan(), &e, Profile::Plain).unwrap();
        assert_eq!(plain.len(), 2);
        assert!(plain.iter().all(|s| s.clauses[0].complements.len() == 1));
        let expected = proposition_set(&sam_plan(), &e).unwrap();
        assert_eq!(proposition_set(&fluent, &e).unwrap(), expected);
        assert_eq!(proposition_set(&plain, &e).unwrap(), expected);
    }

    #[test]
    fn single_leaf_is_the_same_in_both_profiles() {
        let plan = DocumentPlan::new(have("high", "pressure"));
        let e = entities();
        assert_eq!(
            plan_sentences(&plan, &e, Profile::Fluent).unwrap(),
            plan_sentences(&plan, &e, Profile::Plain).unwrap()
        );
    }

    #[test]
    fn relation_children_start_paragraphs() {
        let plan = DocumentPlan::new(PlanNode::relation(
            Relation::Sequence,
            vec![
                have("high", "pressure"),
                PlanNode::relation(Relation::Elaboration, vec![have("low", "sugar")]),
                have("high", "sugar"),
            ],
        ));
        let s = plan_sentences(&plan, &entities(), Profile::Fluent).unwrap();
        let paras: Vec<usize> = s.iter().map(|s| s.paragraph).collect();
        assert_eq!(paras, [0, 1, 2]);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let plan = DocumentPlan::new(PlanNode::relation(Relation::Sequence, vec![]));
        assert!(matches!(
            plan_sentences(&plan, &entities(), Profile::Plain),
            Err(SentplanError::InvalidPlan(v)) if v.len() == 1
        ));
    }

    #[test]
    fn profile_names() {
        assert_eq!("plain".parse::<Profile>().unwrap(), Profile::Plain);
        assert!("stilted".parse::<Profile>().is_err());
    }
}
