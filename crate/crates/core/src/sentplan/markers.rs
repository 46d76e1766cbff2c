use crate::ir::{
    ClauseSpec, Conjunct, Determiner, DiscourseMarker, EntityId, HeadSpec, MarkerPosition, Number,
    SentencePlan,
};

/// A discourse marker and the clause shape that triggers it.
#[derive(Debug, Clone, Copy)]
pub struct MarkerRule {
    pub word: &'static str,
    pub position: MarkerPosition,
    pub applies: fn(&ClauseSpec) -> bool,
}

pub const MARKER_RULES: &[MarkerRule] = &[MarkerRule {
    word: "also",
    position: MarkerPosition::PreVerb,
    applies: repeats_condition_verb,
}];

#[derive(PartialEq)]
enum HeadKey<'a> {
    Noun(&'a str),
    Entity(&'a EntityId),
}

type PhraseKey<'a> = (
    Option<&'a str>,
    Option<Determiner>,
    &'a [String],
    HeadKey<'a>,
    Number,
);

/// Complement content with reference modes ignored.
fn content(conjuncts: &[Conjunct]) -> Vec<Vec<PhraseKey<'_>>> {
    conjuncts
        .iter()
        .map(|c| {
            c.phrases
                .iter()
                .map(|p| {
                    let head = match &p.head {
                        HeadSpec::Noun(n) => HeadKey::Noun(n),
                        HeadSpec::Entity(r) => HeadKey::Entity(&r.entity),
                    };
                    (
                        p.preposition.as_deref(),
                        p.determiner,
                        p.premodifiers.as_slice(),
                        head,
                        p.number,
                    )
                })
                .collect()
        })
        .collect()
}

/// "If Sam goes to the hospital, he should also go to the store."
fn repeats_condition_verb(c: &ClauseSpec) -> bool {
    match &c.condition {
        Some(cond) => {
            cond.verb.lemma == c.verb.lemma && content(&cond.complements) != content(&c.complements)
        }
        None => false,
    }
}

fn mark_clause(c: &mut ClauseSpec) {
    for rule in MARKER_RULES {
        if (rule.applies)(c) && !c.markers.iter().any(|m| m.word == rule.word) {
            c.markers.push(DiscourseMarker {
                word: rule.word.to_string(),
                position: rule.position,
            });
        }
    }
}

/// Applies every rule in [`MARKER_RULES`]. Running it twice adds nothing.
pub fn insert_discourse_markers(mut plans: Vec<SentencePlan>) -> Vec<SentencePlan> {
    for sp in &mut plans {
        for c in &mut sp.clauses {
            mark_clause(c);
        }
    }
    plans
}
