//! Intermediate representations passed between pipeline stages.
//!
//! A run moves data through three shapes: a [`DocumentPlan`] (rhetorical
//! tree of [`Message`]s produced by the schema interpreter), a list of
//! [`SentencePlan`]s (clause-level deep syntax produced by the sentence
//! planner), and finally text. Every intermediate has a canonical JSON form
//! used by the CLI stage dumps.
//!
//! [`proposition_set`] reduces either of the first two shapes to a set of
//! canonical tuples. Two representations carry the same information iff their
//! proposition sets are equal, which is how the sentence planner is checked.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Source key of messages built from schema literals alone; always resolves.
pub const LITERAL_SOURCE_KEY: &str = "schema:literal";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrError {
    #[error("referential integrity: entity `{0}` is not in the entity table")]
    DanglingEntity(EntityId),
    #[error("duplicate entity id `{0}`")]
    DuplicateEntity(EntityId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Masculine,
    Feminine,
    Neuter,
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    #[default]
    Singular,
    Plural,
}

impl Number {
    fn is_singular(&self) -> bool {
        *self == Number::Singular
    }
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Person {
    First,
    Second,
    #[default]
    Third,
}

impl Person {
    fn is_third(&self) -> bool {
        *self == Person::Third
    }
}

/// A discourse referent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Common-noun lemma used when the entity has no proper name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<String>,
    pub gender: Gender,
    #[serde(default, skip_serializing_if = "Number::is_singular")]
    pub number: Number,
    #[serde(default, skip_serializing_if = "Person::is_third")]
    pub person: Person,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub honorific: Option<String>,
}

impl Entity {
    pub fn named(id: impl Into<String>, name: impl Into<String>, gender: Gender) -> Self {
        Entity {
            id: EntityId::new(id),
            name: Some(name.into()),
            head: None,
            gender,
            number: Number::Singular,
            person: Person::Third,
            honorific: None,
        }
    }

    pub fn common(id: impl Into<String>, head: impl Into<String>, gender: Gender) -> Self {
        Entity {
            id: EntityId::new(id),
            name: None,
            head: Some(head.into()),
            gender,
            number: Number::Singular,
            person: Person::Third,
            honorific: None,
        }
    }

    pub fn with_honorific(mut self, honorific: impl Into<String>) -> Self {
        self.honorific = Some(honorific.into());
        self
    }

    pub fn with_person(mut self, person: Person) -> Self {
        self.person = person;
        self
    }

    pub fn with_number(mut self, number: Number) -> Self {
        self.number = number;
        self
    }

    pub fn has_name(&self) -> bool {
        self.name.as_deref().is_some_and(|n| !n.trim().is_empty())
    }

    pub fn has_head(&self) -> bool {
        self.head.as_deref().is_some_and(|h| !h.trim().is_empty())
    }
}

/// Entities of one generation run, keyed by id. Serializes as a list sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Entity>", into = "Vec<Entity>")]
pub struct EntityTable(BTreeMap<EntityId, Entity>);

impl EntityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entity: Entity) -> Result<(), IrError> {
        if self.0.contains_key(&entity.id) {
            return Err(IrError::DuplicateEntity(entity.id));
        }
        self.0.insert(entity.id.clone(), entity);
        Ok(())
    }

    pub fn get(&self, id: &EntityId) -> Option<&Entity> {
        self.0.get(id)
    }

    pub fn lookup(&self, id: &EntityId) -> Result<&Entity, IrError> {
        self.get(id)
            .ok_or_else(|| IrError::DanglingEntity(id.clone()))
    }

    pub fn contains(&self, id: &EntityId) -> bool {
        self.0.contains_key(id)
    }

    pub fn remove(&mut self, id: &EntityId) -> Option<Entity> {
        self.0.remove(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.0.values()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<Entity>> for EntityTable {
    type Error = IrError;

    fn try_from(entities: Vec<Entity>) -> Result<Self, Self::Error> {
        let mut table = EntityTable::new();
        for e in entities {
            table.insert(e)?;
        }
        Ok(table)
    }
}

impl From<EntityTable> for Vec<Entity> {
    fn from(table: EntityTable) -> Self {
        table.0.into_values().collect()
    }
}

impl FromIterator<Entity> for EntityTable {
    /// Later duplicates replace earlier ones.
    fn from_iter<I: IntoIterator<Item = Entity>>(iter: I) -> Self {
        EntityTable(iter.into_iter().map(|e| (e.id.clone(), e)).collect())
    }
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    #[default]
    Present,
    Past,
    Future,
}

impl Tense {
    fn is_present(&self) -> bool {
        *self == Tense::Present
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modal {
    Should,
    Must,
    Can,
}

impl Modal {
    pub fn as_str(&self) -> &'static str {
        match self {
            Modal::Should => "should",
            Modal::Must => "must",
            Modal::Can => "can",
        }
    }
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

impl Polarity {
    fn is_positive(&self) -> bool {
        *self == Polarity::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhraseKind {
    NounPhrase,
    PrepositionalPhrase,
    EntityReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Determiner {
    /// Indefinite article; orthography picks "a" or "an".
    A,
    The,
}

impl Determiner {
    pub fn as_str(&self) -> &'static str {
        match self {
            Determiner::A => "a",
            Determiner::The => "the",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhraseHead {
    Noun(String),
    Entity(EntityId),
}

/// A complement of a [`Message`]: "high blood pressure", "to the hospital", or an entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementPhrase {
    pub kind: PhraseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determiner: Option<Determiner>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premodifiers: Vec<String>,
    pub head: PhraseHead,
    #[serde(default, skip_serializing_if = "Number::is_singular")]
    pub number: Number,
}

impl ComplementPhrase {
    pub fn noun(determiner: Option<Determiner>, premodifiers: &[&str], head: &str) -> Self {
        ComplementPhrase {
            kind: PhraseKind::NounPhrase,
            preposition: None,
            determiner,
            premodifiers: premodifiers.iter().map(|s| s.to_string()).collect(),
            head: PhraseHead::Noun(head.to_string()),
            number: Number::Singular,
        }
    }

    pub fn entity(id: impl Into<String>) -> Self {
        ComplementPhrase {
            kind: PhraseKind::EntityReference,
            preposition: None,
            determiner: None,
            premodifiers: Vec::new(),
            head: PhraseHead::Entity(EntityId::new(id)),
            number: Number::Singular,
        }
    }

    /// Wraps a noun phrase or entity reference in a preposition.
    pub fn prepositional(preposition: &str, object: ComplementPhrase) -> Self {
        ComplementPhrase {
            kind: PhraseKind::PrepositionalPhrase,
            preposition: Some(preposition.to_string()),
            ..object
        }
    }

    pub fn plural(mut self) -> Self {
        self.number = Number::Plural;
        self
    }
}

/// One atomic proposition selected from the input data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub subject: EntityId,
    pub verb: String,
    /// Pre-verbal adverbs ("just").
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adverbs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complements: Vec<ComplementPhrase>,
    #[serde(default, skip_serializing_if = "Tense::is_present")]
    pub tense: Tense,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modal: Option<Modal>,
    #[serde(default, skip_serializing_if = "Polarity::is_positive")]
    pub polarity: Polarity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Box<Message>>,
    pub source_key: String,
}

impl Message {
    pub fn new(
        subject: impl Into<String>,
        verb: impl Into<String>,
        source_key: impl Into<String>,
    ) -> Self {
        Message {
            subject: EntityId::new(subject),
            verb: verb.into(),
            adverbs: Vec::new(),
            complements: Vec::new(),
            tense: Tense::Present,
            modal: None,
            polarity: Polarity::Positive,
            condition: None,
            source_key: source_key.into(),
        }
    }

    pub fn with_complement(mut self, c: ComplementPhrase) -> Self {
        self.complements.push(c);
        self
    }

    pub fn with_adverb(mut self, adverb: impl Into<String>) -> Self {
        self.adverbs.push(adverb.into());
        self
    }

    pub fn with_tense(mut self, tense: Tense) -> Self {
        self.tense = tense;
        self
    }

    pub fn with_modal(mut self, modal: Modal) -> Self {
        self.modal = Some(modal);
        self
    }

    pub fn negated(mut self) -> Self {
        self.polarity = Polarity::Negative;
        self
    }

    pub fn with_condition(mut self, condition: Message) -> Self {
        self.condition = Some(Box::new(condition));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Sequence,
    Elaboration,
    Contrast,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Sequence => "sequence",
            Relation::Elaboration => "elaboration",
            Relation::Contrast => "contrast",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sequence" => Some(Relation::Sequence),
            "elaboration" => Some(Relation::Elaboration),
            "contrast" => Some(Relation::Contrast),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanNode {
    Leaf {
        message: Message,
    },
    Relation {
        label: Relation,
        children: Vec<PlanNode>,
    },
}

impl PlanNode {
    pub fn leaf(message: Message) -> Self {
        PlanNode::Leaf { message }
    }

    pub fn relation(label: Relation, children: Vec<PlanNode>) -> Self {
        PlanNode::Relation { label, children }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Message>) {
        match self {
            PlanNode::Leaf { message } => out.push(message),
            PlanNode::Relation { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }
}

/// Rhetorical tree over messages. A document with nothing to say has no root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentPlan {
    pub root: Option<PlanNode>,
}

impl DocumentPlan {
    pub fn empty() -> Self {
        DocumentPlan { root: None }
    }

    pub fn new(root: PlanNode) -> Self {
        DocumentPlan { root: Some(root) }
    }

    /// Leaf messages in document order.
    pub fn leaves(&self) -> Vec<&Message> {
        let mut out = Vec::new();
        if let Some(root) = &self.root {
            root.collect_leaves(&mut out);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMode {
    FullName,
    HeadNoun,
    Pronoun,
    ReflexivePronoun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Subjective,
    Objective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSpec {
    pub entity: EntityId,
    pub mode: ReferenceMode,
    pub case: Case,
}

impl ReferenceSpec {
    /// Full reference: the proper name when the entity has one, else its head noun.
    pub fn full(entity: &Entity, case: Case) -> Self {
        let mode = if entity.has_name() {
            ReferenceMode::FullName
        } else {
            ReferenceMode::HeadNoun
        };
        ReferenceSpec {
            entity: entity.id.clone(),
            mode,
            case,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self.mode, ReferenceMode::FullName | ReferenceMode::HeadNoun)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadSpec {
    Noun(String),
    Entity(ReferenceSpec),
}

/// A complement phrase after reference planning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseSpec {
    pub kind: PhraseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preposition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determiner: Option<Determiner>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premodifiers: Vec<String>,
    pub head: HeadSpec,
    #[serde(default, skip_serializing_if = "Number::is_singular")]
    pub number: Number,
}

impl PhraseSpec {
    /// Plans a complement with every entity reference in full form.
    pub fn from_phrase(p: &ComplementPhrase, entities: &EntityTable) -> Result<Self, IrError> {
        let head = match &p.head {
            PhraseHead::Noun(n) => HeadSpec::Noun(n.clone()),
            PhraseHead::Entity(id) => {
                HeadSpec::Entity(ReferenceSpec::full(entities.lookup(id)?, Case::Objective))
            }
        };
        Ok(PhraseSpec {
            kind: p.kind,
            preposition: p.preposition.clone(),
            determiner: p.determiner,
            premodifiers: p.premodifiers.clone(),
            head,
            number: p.number,
        })
    }
}

/// The complements contributed by one source message. Conjuncts of a clause
/// are coordinated with "and".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjunct {
    pub phrases: Vec<PhraseSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbSpec {
    pub lemma: String,
    #[serde(default, skip_serializing_if = "Tense::is_present")]
    pub tense: Tense,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modal: Option<Modal>,
    #[serde(default, skip_serializing_if = "Polarity::is_positive")]
    pub polarity: Polarity,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub adverbs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerPosition {
    /// Before the main verb, after any auxiliary or modal.
    PreVerb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscourseMarker {
    pub word: String,
    pub position: MarkerPosition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseSpec {
    pub subject: ReferenceSpec,
    pub verb: VerbSpec,
    /// At least one conjunct; a clause built from one message has exactly one.
    pub complements: Vec<Conjunct>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub markers: Vec<DiscourseMarker>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Box<ClauseSpec>>,
}

impl ClauseSpec {
    /// Unaggregated clause for one message, all references full.
    pub fn from_message(m: &Message, entities: &EntityTable) -> Result<Self, IrError> {
        let subject = ReferenceSpec::full(entities.lookup(&m.subject)?, Case::Subjective);
        let phrases = m
            .complements
            .iter()
            .map(|p| PhraseSpec::from_phrase(p, entities))
            .collect::<Result<Vec<_>, _>>()?;
        let condition = match &m.condition {
            Some(c) => Some(Box::new(ClauseSpec::from_message(c, entities)?)),
            None => None,
        };
        Ok(ClauseSpec {
            subject,
            verb: VerbSpec {
                lemma: m.verb.clone(),
                tense: m.tense,
                modal: m.modal,
                polarity: m.polarity,
                adverbs: m.adverbs.clone(),
            },
            complements: vec![Conjunct { phrases }],
            markers: Vec::new(),
            condition,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalPunct {
    #[default]
    Period,
    QuestionMark,
}

/// Deep syntactic representation of one output sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePlan {
    pub clauses: Vec<ClauseSpec>,
    #[serde(default)]
    pub terminal: TerminalPunct,
    /// Zero-based paragraph index; a change between neighbours is a paragraph break.
    #[serde(default)]
    pub paragraph: usize,
}

/// Stage-one dump: the document plan plus the entities it refers to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub entities: EntityTable,
    pub plan: DocumentPlan,
}

/// Stage-two dump: sentence plans plus the entities they refer to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceDocument {
    pub entities: EntityTable,
    pub sentences: Vec<SentencePlan>,
}

/// Canonical JSON: field order fixed by the type definitions, entities sorted
/// by id, two-space indentation, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("IR values always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Propositions

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalHead {
    Noun(String),
    Entity(EntityId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalPhrase {
    pub kind: PhraseKind,
    pub preposition: Option<String>,
    pub determiner: Option<Determiner>,
    pub premodifiers: Vec<String>,
    pub head: CanonicalHead,
    pub number: Number,
}

impl CanonicalPhrase {
    fn new(
        kind: PhraseKind,
        preposition: Option<&str>,
        determiner: Option<Determiner>,
        premodifiers: &[String],
        head: CanonicalHead,
        number: Number,
    ) -> Self {
        let mut premodifiers: Vec<String> = premodifiers.iter().map(|p| p.to_lowercase()).collect();
        premodifiers.sort();
        CanonicalPhrase {
            kind,
            preposition: preposition.map(str::to_lowercase),
            determiner,
            premodifiers,
            head,
            number,
        }
    }
}

/// Canonical tuple for one proposition. Reference modes are not part of it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposition {
    pub subject: EntityId,
    pub verb: String,
    pub adverbs: Vec<String>,
    pub complements: Vec<CanonicalPhrase>,
    pub tense: Tense,
    pub modal: Option<Modal>,
    pub polarity: Polarity,
    pub condition: Option<Box<Proposition>>,
}

pub type PropositionSet = BTreeSet<Proposition>;

/// Anything that can be reduced to a proposition set.
pub trait PropositionSource {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError>;
}

pub fn proposition_set<P: PropositionSource + ?Sized>(
    source: &P,
    entities: &EntityTable,
) -> Result<PropositionSet, IrError> {
    source.propositions(entities)
}

fn check(entities: &EntityTable, id: &EntityId) -> Result<(), IrError> {
    entities.lookup(id).map(|_| ())
}

fn lower_all(words: &[String]) -> Vec<String> {
    words.iter().map(|w| w.to_lowercase()).collect()
}

fn canonical_phrase(
    p: &ComplementPhrase,
    entities: &EntityTable,
) -> Result<CanonicalPhrase, IrError> {
    let head = match &p.head {
        PhraseHead::Noun(n) => CanonicalHead::Noun(n.to_lowercase()),
        PhraseHead::Entity(id) => {
            check(entities, id)?;
            CanonicalHead::Entity(id.clone())
        }
    };
    Ok(CanonicalPhrase::new(
        p.kind,
        p.preposition.as_deref(),
        p.determiner,
        &p.premodifiers,
        head,
        p.number,
    ))
}

fn canonical_phrase_spec(
    p: &PhraseSpec,
    entities: &EntityTable,
) -> Result<CanonicalPhrase, IrError> {
    let head = match &p.head {
        HeadSpec::Noun(n) => CanonicalHead::Noun(n.to_lowercase()),
        HeadSpec::Entity(r) => {
            check(entities, &r.entity)?;
            CanonicalHead::Entity(r.entity.clone())
        }
    };
    Ok(CanonicalPhrase::new(
        p.kind,
        p.preposition.as_deref(),
        p.determiner,
        &p.premodifiers,
        head,
        p.number,
    ))
}

fn message_proposition(m: &Message, entities: &EntityTable) -> Result<Proposition, IrError> {
    check(entities, &m.subject)?;
    let complements = m
        .complements
        .iter()
        .map(|p| canonical_phrase(p, entities))
        .collect::<Result<_, _>>()?;
    let condition = match &m.condition {
        Some(c) => Some(Box::new(message_proposition(c, entities)?)),
        None => None,
    };
    Ok(Proposition {
        subject: m.subject.clone(),
        verb: m.verb.to_lowercase(),
        adverbs: lower_all(&m.adverbs),
        complements,
        tense: m.tense,
        modal: m.modal,
        polarity: m.polarity,
        condition,
    })
}

/// One proposition per conjunct of the clause.
fn clause_propositions(
    c: &ClauseSpec,
    entities: &EntityTable,
) -> Result<Vec<Proposition>, IrError> {
    check(entities, &c.subject.entity)?;
    let condition = match &c.condition {
        Some(cond) => {
            let mut props = clause_propositions(cond, entities)?;
            // A condition is a single proposition; an aggregated condition
            // would make the tuple ambiguous.
            debug_assert_eq!(props.len(), 1);
            props.pop().map(Box::new)
        }
        None => None,
    };
    c.complements
        .iter()
        .map(|conj| {
            let complements = conj
                .phrases
                .iter()
                .map(|p| canonical_phrase_spec(p, entities))
                .collect::<Result<_, _>>()?;
            Ok(Proposition {
                subject: c.subject.entity.clone(),
                verb: c.verb.lemma.to_lowercase(),
                adverbs: lower_all(&c.verb.adverbs),
                complements,
                tense: c.verb.tense,
                modal: c.verb.modal,
                polarity: c.verb.polarity,
                condition: condition.clone(),
            })
        })
        .collect()
}

impl PropositionSource for DocumentPlan {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        self.leaves()
            .into_iter()
            .map(|m| message_proposition(m, entities))
            .collect()
    }
}

impl PropositionSource for Message {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        Ok(std::iter::once(message_proposition(self, entities)?).collect())
    }
}

impl PropositionSource for ClauseSpec {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        Ok(clause_propositions(self, entities)?.into_iter().collect())
    }
}

impl PropositionSource for [ClauseSpec] {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        let mut out = PropositionSet::new();
        for c in self {
            out.extend(clause_propositions(c, entities)?);
        }
        Ok(out)
    }
}

impl PropositionSource for [SentencePlan] {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        let mut out = PropositionSet::new();
        for s in self {
            out.extend(s.clauses.as_slice().propositions(entities)?);
        }
        Ok(out)
    }
}

impl PropositionSource for Vec<SentencePlan> {
    fn propositions(&self, entities: &EntityTable) -> Result<PropositionSet, IrError> {
        self.as_slice().propositions(entities)
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    EmptyRelation,
    ReferentialIntegrity,
    SourceKey,
    VerbLemma,
    PhraseShape,
    ConditionDepth,
    ModalTense,
    EntityNaming,
    Coordination,
    ReflexiveSubject,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::EmptyRelation => "relation-needs-children",
            Rule::ReferentialIntegrity => "referential-integrity",
            Rule::SourceKey => "source-key",
            Rule::VerbLemma => "verb-lemma",
            Rule::PhraseShape => "phrase-shape",
            Rule::ConditionDepth => "condition-depth",
            Rule::ModalTense => "modal-tense",
            Rule::EntityNaming => "entity-naming",
            Rule::Coordination => "coordination",
            Rule::ReflexiveSubject => "reflexive-subject",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Location, e.g. `root.children[1].message.condition`.
    pub path: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.path, self.rule.as_str(), self.detail)
    }
}

struct Validator<'a> {
    entities: &'a EntityTable,
    sources: Option<&'a BTreeSet<String>>,
    out: Vec<Violation>,
}

impl Validator<'_> {
    fn push(&mut self, path: &str, rule: Rule, detail: impl Into<String>) {
        self.out.push(Violation {
            path: path.to_string(),
            rule,
            detail: detail.into(),
        });
    }

    fn entity(&mut self, path: &str, id: &EntityId) {
        if !self.entities.contains(id) {
            self.push(
                path,
                Rule::ReferentialIntegrity,
                format!("entity `{id}` is not in the entity table"),
            );
        }
    }

    fn node(&mut self, path: &str, node: &PlanNode) {
        match node {
            PlanNode::Leaf { message } => self.message(&format!("{path}.message"), message, 0),
            PlanNode::Relation { label, children } => {
                if children.is_empty() {
                    self.push(
                        path,
                        Rule::EmptyRelation,
                        format!("{} relation has no children", label.as_str()),
                    );
                }
                for (i, c) in children.iter().enumerate() {
                    self.node(&format!("{path}.children[{i}]"), c);
                }
            }
        }
    }

    fn verb(&mut self, path: &str, lemma: &str, tense: Tense, modal: Option<Modal>) {
        if lemma.is_empty() || lemma.chars().any(|c| c.is_uppercase() || c.is_whitespace()) {
            self.push(
                path,
                Rule::VerbLemma,
                format!("verb lemma `{lemma}` must be a non-empty lowercase word"),
            );
        }
        if modal.is_some() && tense != Tense::Present {
            self.push(
                path,
                Rule::ModalTense,
                "modal clauses must be in the present tense",
            );
        }
    }

    fn message(&mut self, path: &str, m: &Message, depth: usize) {
        self.entity(&format!("{path}.subject"), &m.subject);
        self.verb(path, &m.verb, m.tense, m.modal);
        if let Some(sources) = self.sources {
            if m.source_key != LITERAL_SOURCE_KEY && !sources.contains(&m.source_key) {
                self.push(
                    path,
                    Rule::SourceKey,
                    format!(
                        "source key `{}` does not resolve to an input record",
                        m.source_key
                    ),
                );
            }
        }
        for (i, p) in m.complements.iter().enumerate() {
            self.phrase(
                &format!("{path}.complements[{i}]"),
                p.kind,
                p.preposition.as_deref(),
                &p.premodifiers,
                &p.head.head_ref(),
            );
            if let PhraseHead::Entity(id) = &p.head {
                self.entity(&format!("{path}.complements[{i}]"), id);
            }
        }
        if let Some(c) = &m.condition {
            let cpath = format!("{path}.condition");
            if depth >= 1 {
                self.push(
                    &cpath,
                    Rule::ConditionDepth,
                    "conditions nest at most one level",
                );
            }
            self.message(&cpath, c, depth + 1);
        }
    }

    fn phrase(
        &mut self,
        path: &str,
        kind: PhraseKind,
        preposition: Option<&str>,
        premodifiers: &[String],
        head: &HeadRef,
    ) {
        let has_prep = preposition.is_some_and(|p| !p.trim().is_empty());
        match kind {
            PhraseKind::PrepositionalPhrase if !has_prep => self.push(
                path,
                Rule::PhraseShape,
                "prepositional phrase without a preposition",
            ),
            PhraseKind::NounPhrase | PhraseKind::EntityReference if preposition.is_some() => self
                .push(
                    path,
                    Rule::PhraseShape,
                    "only prepositional phrases carry a preposition",
                ),
            _ => {}
        }
        match (kind, head) {
            (PhraseKind::EntityReference, HeadRef::Noun) => {
                self.push(path, Rule::PhraseShape, "entity reference with a noun head")
            }
            (PhraseKind::NounPhrase, HeadRef::Entity) => {
                self.push(path, Rule::PhraseShape, "noun phrase with an entity head")
            }
            _ => {}
        }
        if kind == PhraseKind::EntityReference && !premodifiers.is_empty() {
            self.push(
                path,
                Rule::PhraseShape,
                "entity references carry no premodifiers",
            );
        }
    }

    fn entities(&mut self) {
        for e in self.entities.iter() {
            if e.has_name() == e.has_head() {
                self.out.push(Violation {
                    path: format!("entities[{}]", e.id),
                    rule: Rule::EntityNaming,
                    detail: "exactly one of name and head must be non-empty".into(),
                });
            }
        }
    }

    fn clause(&mut self, path: &str, c: &ClauseSpec, depth: usize) {
        self.entity(&format!("{path}.subject"), &c.subject.entity);
        if c.subject.mode == ReferenceMode::ReflexivePronoun {
            self.push(path, Rule::ReflexiveSubject, "subjects cannot be reflexive");
        }
        self.verb(path, &c.verb.lemma, c.verb.tense, c.verb.modal);
        if c.complements.is_empty() {
            self.push(
                path,
                Rule::Coordination,
                "clause has no complement conjunct",
            );
        }
        if c.complements.len() > 1 && c.complements.iter().any(|g| g.phrases.is_empty()) {
            self.push(
                path,
                Rule::Coordination,
                "coordinated conjuncts must be non-empty",
            );
        }
        for (g, conj) in c.complements.iter().enumerate() {
            for (i, p) in conj.phrases.iter().enumerate() {
                let ppath = format!("{path}.complements[{g}].phrases[{i}]");
                let head = match &p.head {
                    HeadSpec::Noun(_) => HeadRef::Noun,
                    HeadSpec::Entity(r) => {
                        self.entity(&ppath, &r.entity);
                        HeadRef::Entity
                    }
                };
                self.phrase(
                    &ppath,
                    p.kind,
                    p.preposition.as_deref(),
                    &p.premodifiers,
                    &head,
                );
            }
        }
        if let Some(cond) = &c.condition {
            let cpath = format!("{path}.condition");
            if depth >= 1 {
                self.push(
                    &cpath,
                    Rule::ConditionDepth,
                    "conditions nest at most one level",
                );
            }
            if cond.complements.len() > 1 {
                self.push(
                    &cpath,
                    Rule::Coordination,
                    "conditions cannot be aggregated",
                );
            }
            self.clause(&cpath, cond, depth + 1);
        }
    }
}

enum HeadRef {
    Noun,
    Entity,
}

impl PhraseHead {
    fn head_ref(&self) -> HeadRef {
        match self {
            PhraseHead::Noun(_) => HeadRef::Noun,
            PhraseHead::Entity(_) => HeadRef::Entity,
        }
    }
}

/// Checks every type invariant of a document plan. An empty result means the
/// plan is well formed. `sources`, when given, is the set of input record keys
/// that leaf `source_key`s must resolve into.
pub fn validate(
    plan: &DocumentPlan,
    entities: &EntityTable,
    sources: Option<&BTreeSet<String>>,
) -> Vec<Violation> {
    let mut v = Validator {
        entities,
        sources,
        out: Vec::new(),
    };
    v.entities();
    if let Some(root) = &plan.root {
        v.node("root", root);
    }
    v.out
}

/// Invariant check for a sentence-plan list, used when plans arrive from outside.
pub fn validate_sentences(sentences: &[SentencePlan], entities: &EntityTable) -> Vec<Violation> {
    let mut v = Validator {
        entities,
        sources: None,
        out: Vec::new(),
    };
    v.entities();
    for (s, sp) in sentences.iter().enumerate() {
        if sp.clauses.is_empty() {
            v.push(
                &format!("sentences[{s}]"),
                Rule::Coordination,
                "sentence has no clauses",
            );
        }
        for (i, c) in sp.clauses.iter().enumerate() {
            v.clause(&format!("sentences[{s}].clauses[{i}]"), c, 0);
        }
    }
    v.out
}
