mod common;

use common::tsv;
use nlgen::ir::{Gender, Number, Person, Tense};
use nlgen::lexicon::{Lexicon, PronounCase};

#[test]
fn plurals_match_hand_dictionary() {
    let lex = Lexicon::embedded();
    let rows = tsv("nouns.tsv");
    assert_eq!(rows.len(), 40);
    let mismatches: Vec<String> = rows
        .iter()
        .filter_map(|r| {
            let got = lex.pluralize(&r[0]).unwrap();
            (got != r[1]).then(|| format!("{}: expected {}, got {got}", r[0], r[1]))
        })
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

#[test]
fn verb_forms_match_hand_table() {
    let lex = Lexicon::embedded();
    let rows = tsv("verbs.tsv");
    assert_eq!(rows.len(), 25);
    let cells = [
        (Person::First, Number::Singular, Tense::Present),
        (Person::Third, Number::Singular, Tense::Present),
        (Person::Third, Number::Plural, Tense::Present),
        (Person::First, Number::Singular, Tense::Past),
        (Person::Third, Number::Singular, Tense::Past),
        (Person::Third, Number::Singular, Tense::Future),
    ];
    let mut mismatches = Vec::new();
    for r in &rows {
        assert_eq!(r.len(), 7, "{r:?}");
        for (i, &(p, n, t)) in cells.iter().enumerate() {
            let got = lex.verb_form(&r[0], p, n, t);
            if got != r[i + 1] {
                mismatches.push(format!(
                    "{} {p:?} {n:?} {t:?}: expected {}, got {got}",
                    r[0],
                    r[i + 1]
                ));
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

#[test]
fn sibilant_plurals_never_take_bare_s() {
    let lex = Lexicon::embedded();
    for lemma in [
        "box", "gas", "buzz", "church", "dish", "lens", "fax", "waltz",
    ] {
        let p = lex.pluralize(lemma).unwrap();
        assert_ne!(p, format!("{lemma}s"), "{lemma}");
        assert!(p.ends_with("es"), "{lemma} -> {p}");
    }
}

#[test]
fn third_singular_present_differs_from_lemma() {
    let lex = Lexicon::embedded();
    for r in tsv("verbs.tsv") {
        assert_ne!(
            lex.verb_form(&r[0], Person::Third, Number::Singular, Tense::Present),
            r[0]
        );
    }
}

#[test]
fn anchor_forms() {
    let lex = Lexicon::embedded();
    assert_eq!(lex.pluralize("box").unwrap(), "boxes");
    assert_eq!(lex.pluralize("report").unwrap(), "reports");
    assert!(lex.pluralize("").is_err());
    assert_eq!(
        lex.verb_form("be", Person::First, Number::Singular, Tense::Present),
        "am"
    );
    assert_eq!(
        lex.verb_form("have", Person::Third, Number::Singular, Tense::Present),
        "has"
    );
    assert_eq!(
        lex.pronoun(
            Person::Third,
            Number::Singular,
            Gender::Feminine,
            PronounCase::Subjective
        ),
        "she"
    );
    assert_eq!(
        lex.pronoun(
            Person::Third,
            Number::Singular,
            Gender::Masculine,
            PronounCase::Reflexive
        ),
        "himself"
    );
    assert_eq!(
        lex.pronoun(
            Person::First,
            Number::Singular,
            Gender::Neuter,
            PronounCase::Subjective
        ),
        "I"
    );
}

#[test]
fn pronoun_table_is_total() {
    let lex = Lexicon::embedded();
    for p in [Person::First, Person::Second, Person::Third] {
        for n in [Number::Singular, Number::Plural] {
            for g in [Gender::Masculine, Gender::Feminine, Gender::Neuter] {
                for c in [
                    PronounCase::Subjective,
                    PronounCase::Objective,
                    PronounCase::Reflexive,
                ] {
                    assert!(!lex.pronoun(p, n, g, c).is_empty());
                }
            }
        }
    }
}
