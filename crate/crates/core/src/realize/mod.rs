//! Surface realization: sentence plans to tokens to text.

mod orthography;
mod template;
mod tokens;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ir::{
    validate_sentences, ClauseSpec, Conjunct, Entity, EntityId, EntityTable, HeadSpec, IrError,
    MarkerPosition, Number, Person, Polarity, ReferenceMode, ReferenceSpec, SentencePlan, Tense,
    TerminalPunct, Violation,
};
use crate::lexicon::{Lexicon, LexiconError, PronounCase};

pub use orthography::{orthography, RewriteRule, RULES};
pub use template::{
    realize_template, Segment, SlotKind, SlotValue, Template, TemplateError, TemplateSet,
    DEFAULT_TEMPLATES,
};
pub use tokens::{Boundary, Mark, Token, TokenStream, ABBREVIATIONS};

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("invalid sentence plan: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidPlan(Vec<Violation>),
}

/// "Mrs. Black", "Sam", "the nurse".
fn full_reference(e: &Entity, lex: &Lexicon, out: &mut TokenStream) -> Result<(), LexiconError> {
    match (&e.name, &e.head) {
        (Some(name), _) if !name.trim().is_empty() => {
            if let Some(h) = &e.honorific {
                out.words(h, true);
            }
            out.words(name, true);
        }
        (_, Some(head)) => {
            out.push(Token::word("the"));
            match e.number {
                Number::Plural => out.words(&lex.pluralize(head)?, false),
                Number::Singular => out.words(head, false),
            }
        }
        _ => out.words(e.id.as_str(), false),
    }
    Ok(())
}

/// Full reference as plain text, for template slots.
pub(crate) fn full_reference_text(e: &Entity, lex: &Lexicon) -> String {
    let mut ts = TokenStream::new();
    if full_reference(e, lex, &mut ts).is_err() {
        ts.words(e.id.as_str(), false);
    }
    plain_words(&ts)
}

fn plain_words(ts: &TokenStream) -> String {
    ts.tokens
        .iter()
        .filter_map(|t| match t {
            Token::Word { text, .. } => Some(text.as_str()),
            _ => None,
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Person and number the verb agrees with.
pub fn subject_agreement(r: &ReferenceSpec, e: &Entity) -> (Person, Number) {
    match r.mode {
        ReferenceMode::Pronoun | ReferenceMode::ReflexivePronoun => (e.person, e.number),
        ReferenceMode::FullName | ReferenceMode::HeadNoun => (Person::Third, e.number),
    }
}

struct ClauseRealizer<'a> {
    entities: &'a EntityTable,
    lex: &'a Lexicon,
}

impl ClauseRealizer<'_> {
    fn reference(
        &self,
        r: &ReferenceSpec,
        reflexive: bool,
        out: &mut TokenStream,
    ) -> Result<(), RealizeError> {
        let e = self.entities.lookup(&r.entity)?;
        let mode = if reflexive {
            ReferenceMode::ReflexivePronoun
        } else {
            r.mode
        };
        let case = match mode {
            ReferenceMode::Pronoun => PronounCase::from(r.case),
            ReferenceMode::ReflexivePronoun => PronounCase::Reflexive,
            ReferenceMode::FullName | ReferenceMode::HeadNoun => {
                full_reference(e, self.lex, out)?;
                return Ok(());
            }
        };
        out.push(Token::word(
            self.lex.pronoun(e.person, e.number, e.gender, case),
        ));
        Ok(())
    }

    fn conjunct(
        &self,
        c: &Conjunct,
        subject: &EntityId,
        out: &mut TokenStream,
    ) -> Result<(), RealizeError> {
        for p in &c.phrases {
            if let Some(prep) = &p.preposition {
                out.words(prep, false);
            }
            match &p.head {
                HeadSpec::Entity(r) => self.reference(r, &r.entity == subject, out)?,
                HeadSpec::Noun(noun) => {
                    if let Some(d) = p.determiner {
                        out.push(Token::word(d.as_str()));
                    }
                    for m in &p.premodifiers {
                        out.words(m, false);
                    }
                    match p.number {
                        Number::Plural => out.words(&self.lex.pluralize(noun)?, false),
                        Number::Singular => out.words(noun, false),
                    }
                }
            }
        }
        Ok(())
    }

    /// Auxiliaries, markers, adverbs, negation and main verb, agreeing with
    /// the subject as rendered: a first-person entity referred to by name
    /// takes third-person agreement.
    fn verb_group(&self, c: &ClauseSpec, subject: &Entity, out: &mut TokenStream) {
        let v = &c.verb;
        let (person, number) = subject_agreement(&c.subject, subject);
        let negative = v.polarity == Polarity::Negative;
        let (aux, main): (Vec<String>, Option<String>) = if let Some(m) = v.modal {
            (vec![m.as_str().to_string()], Some(v.lemma.clone()))
        } else if v.lemma == "be" && v.tense != Tense::Future {
            (
                vec![self.lex.verb_form("be", person, number, v.tense)],
                None,
            )
        } else if negative && v.tense != Tense::Future {
            (
                vec![self.lex.verb_form("do", person, number, v.tense)],
                Some(v.lemma.clone()),
            )
        } else {
            let form = self.lex.verb_form(&v.lemma, person, number, v.tense);
            let mut words: Vec<String> = form.split_whitespace().map(str::to_string).collect();
            let main = words.pop();
            (words, main)
        };
        for a in aux {
            out.push(Token::word(a));
        }
        for m in &c.markers {
            match m.position {
                MarkerPosition::PreVerb => out.words(&m.word, false),
            }
        }
        for a in &v.adverbs {
            out.words(a, false);
        }
        if negative {
            out.push(Token::word("not"));
        }
        if let Some(main) = main {
            out.push(Token::word(main));
        }
    }

    fn clause(&self, c: &ClauseSpec, out: &mut TokenStream) -> Result<(), RealizeError> {
        if let Some(cond) = &c.condition {
            out.push(Token::word("if"));
            self.clause(cond, out)?;
            out.push(Token::Punct(Mark::Comma));
        }
        let subject = self.entities.lookup(&c.subject.entity)?;
        self.reference(&c.subject, false, out)?;
        self.verb_group(c, subject, out);
        let n = c.complements.len();
        for (i, conj) in c.complements.iter().enumerate() {
            if i > 0 {
                if i == n - 1 {
                    out.push(Token::word("and"));
                } else {
                    out.push(Token::Punct(Mark::Comma));
                }
            }
            self.conjunct(conj, &c.subject.entity, out)?;
        }
        Ok(())
    }
}

/// Tokens for one sentence, ending with its terminal mark. Clauses of a
/// multi-clause sentence are joined with commas.
pub fn realize_sentence(
    sp: &SentencePlan,
    entities: &EntityTable,
    lex: &Lexicon,
) -> Result<TokenStream, RealizeError> {
    let r = ClauseRealizer { entities, lex };
    let mut out = TokenStream::new();
    for (i, c) in sp.clauses.iter().enumerate() {
        if i > 0 {
            out.push(Token::Punct(Mark::Comma));
        }
        r.clause(c, &mut out)?;
    }
    out.push(Token::Punct(match sp.terminal {
        TerminalPunct::Period => Mark::Period,
        TerminalPunct::QuestionMark => Mark::QuestionMark,
    }));
    Ok(out)
}

/// The template for a sentence, if one is named after its verb and the
/// sentence is a single plain present-tense clause.
fn template_for<'t>(sp: &SentencePlan, templates: &'t TemplateSet) -> Option<&'t Template> {
    let [c] = sp.clauses.as_slice() else {
        return None;
    };
    let simple = c.condition.is_none()
        && c.markers.is_empty()
        && c.verb.adverbs.is_empty()
        && c.verb.modal.is_none()
        && c.verb.tense == Tense::Present
        && c.verb.polarity == Polarity::Positive
        && sp.terminal == TerminalPunct::Period;
    if simple {
        templates.get(&c.verb.lemma)
    } else {
        None
    }
}

fn templated(
    t: &Template,
    c: &ClauseSpec,
    entities: &EntityTable,
    lex: &Lexicon,
) -> Result<String, RealizeError> {
    let r = ClauseRealizer { entities, lex };
    let mut complement = TokenStream::new();
    let n = c.complements.len();
    for (i, conj) in c.complements.iter().enumerate() {
        if i > 0 {
            complement.push(Token::word(if i == n - 1 { "and" } else { "," }));
        }
        r.conjunct(conj, &c.subject.entity, &mut complement)?;
    }
    let complement = plain_words(&complement).replace(" ,", ",");
    let slots = BTreeMap::from([
        (
            "subject".to_string(),
            SlotValue::Entity(c.subject.entity.clone()),
        ),
        ("verb".to_string(), SlotValue::Text(c.verb.lemma.clone())),
        ("complement".to_string(), SlotValue::Text(complement)),
    ]);
    Ok(realize_template(t, &slots, entities, lex)?)
}

/// Realizes a whole document. Sentences whose verb has a template are filled
/// in from it; the rest go through clause realization. Paragraph changes
/// become blank lines.
pub fn realize_document(
    sentences: &[SentencePlan],
    entities: &EntityTable,
    lex: &Lexicon,
    templates: &TemplateSet,
) -> Result<String, RealizeError> {
    let violations = validate_sentences(sentences, entities);
    if !violations.is_empty() {
        return Err(RealizeError::InvalidPlan(violations));
    }
    let mut ts = TokenStream::new();
    let mut paragraph = None;
    for sp in sentences {
        if let Some(p) = paragraph {
            ts.push(Token::Boundary(if p == sp.paragraph {
                Boundary::Sentence
            } else {
                Boundary::Paragraph
            }));
        }
        paragraph = Some(sp.paragraph);
        match template_for(sp, templates) {
            Some(t) => {
                let text = templated(t, &sp.clauses[0], entities, lex)?;
                let mut part = TokenStream::from_text(&text);
                if let Some(Token::Boundary(_)) = part.tokens.last() {
                    part.tokens.pop();
                }
                ts.extend(part);
            }
            None => ts.extend(realize_sentence(sp, entities, lex)?),
        }
    }
    if !ts.is_empty() {
        ts.push(Token::Boundary(Boundary::Sentence));
    }
    Ok(orthography(&ts, lex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{ComplementPhrase, Determiner, Gender, Message, Modal};
    use crate::ir::{DocumentPlan, PlanNode, Relation};
    use crate::sentplan::{plan_sentences, Profile};

    fn entities() -> EntityTable {
        [
            Entity::named("sam", "Sam", Gender::Masculine),
            Entity::named("john", "John", Gender::Masculine),
            Entity::named("mrs_black", "Black", Gender::Feminine).with_honorific("Mrs."),
            Entity::named("i", "Grey", Gender::Feminine)
                .with_person(Person::First)
                .with_honorific("Dr."),
            Entity::common("nurse", "nurse", Gender::Feminine),
        ]
        .into_iter()
        .collect()
    }

    fn text(plan: DocumentPlan, profile: Profile) -> String {
        let e = entities();
        let sentences = plan_sentences(&plan, &e, profile).unwrap();
        realize_document(
            &sentences,
            &e,
            &Lexicon::embedded(),
            &TemplateSet::embedded(),
        )
        .unwrap()
    }

    fn seq(ms: Vec<Message>) -> DocumentPlan {
        DocumentPlan::new(PlanNode::relation(
            Relation::Sequence,
            ms.into_iter().map(PlanNode::leaf).collect(),
        ))
    }

    fn go(place: &str) -> Message {
        Message::new("sam", "go", "k").with_complement(ComplementPhrase::prepositional(
            "to",
            ComplementPhrase::noun(Some(Determiner::The), &[], place),
        ))
    }

    #[test]
    fn conditional_with_marker() {
        let m = go("store")
            .with_modal(Modal::Should)
            .with_condition(go("hospital"));
        assert_eq!(
            text(DocumentPlan::new(PlanNode::leaf(m)), Profile::Fluent),
            "If Sam goes to the hospital, he should also go to the store."
        );
    }

    #[test]
    fn reflexive_even_without_planning() {
        let m = Message::new("john", "see", "k")
            .with_tense(Tense::Past)
            .with_complement(ComplementPhrase::entity("john"));
        let plan = DocumentPlan::new(PlanNode::leaf(m));
        assert_eq!(text(plan.clone(), Profile::Fluent), "John saw himself.");
        assert_eq!(text(plan, Profile::Plain), "John saw himself.");
    }

    #[test]
    fn agreement_negation_and_future() {
        let be_here =
            Message::new("i", "be", "k").with_complement(ComplementPhrase::noun(None, &[], "here"));
        let call = Message::new("nurse", "call", "k")
            .with_tense(Tense::Future)
            .with_complement(ComplementPhrase::entity("sam"));
        let rest = Message::new("sam", "rest", "k").negated();
        assert_eq!(
            text(seq(vec![be_here, call, rest]), Profile::Plain),
            "Dr. Grey is here. The nurse will call Sam. Sam does not rest."
        );
    }

    #[test]
    fn three_way_coordination_without_oxford_comma() {
        let have = |adj: &str, noun: &str| {
            Message::new("sam", "have", "k").with_complement(ComplementPhrase::noun(
                Some(Determiner::A),
                &[adj],
                noun,
            ))
        };
        assert_eq!(
            text(
                seq(vec![
                    have("high", "fever"),
                    have("old", "injury"),
                    have("bad", "cough")
                ]),
                Profile::Fluent
            ),
            "Sam has a high fever, an old injury and a bad cough."
        );
    }

    #[test]
    fn template_sentences() {
        let m = Message::new("i", "sign", "k").with_complement(ComplementPhrase::noun(
            None,
            &["12"],
            "March",
        ));
        assert_eq!(
            text(DocumentPlan::new(PlanNode::leaf(m)), Profile::Fluent),
            "Report signed by Dr. Grey on 12 March."
        );
    }

    #[test]
    fn plural_nouns_and_empty_documents() {
        let m = Message::new("sam", "carry", "k")
            .with_complement(ComplementPhrase::noun(None, &["two"], "box").plural());
        assert_eq!(
            text(DocumentPlan::new(PlanNode::leaf(m)), Profile::Fluent),
            "Sam carries two boxes."
        );
        assert_eq!(text(DocumentPlan::empty(), Profile::Fluent), "");
    }
}
