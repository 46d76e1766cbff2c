mod common;

use common::{
    all_cases, demo_cases, demo_schema, example_case, expand_sentences, plan_messages, read,
    EXAMPLES,
};
use nlgen::ir::{proposition_set, validate, PlanDocument, SentenceDocument};
use nlgen::schema::{parse_schema_set, traverse_set, DEFAULT_MAX_VISITS};
use nlgen::sentplan::{plan_sentences, Profile};

#[test]
fn worked_examples_are_byte_exact() {
    for name in EXAMPLES {
        let case = example_case(name);
        assert_eq!(
            case.generate(Profile::Fluent),
            read(&case.expected_fluent),
            "{name}"
        );
    }
}

#[test]
fn demo_goldens_are_byte_exact() {
    for case in demo_cases() {
        assert_eq!(
            case.generate(Profile::Fluent),
            read(&case.expected_fluent),
            "{}",
            case.name
        );
        let plain = case.expected_plain.as_ref().unwrap();
        assert_eq!(case.generate(Profile::Plain), read(plain), "{}", case.name);
    }
}

#[test]
fn corpus_plans_validate_clean() {
    for case in all_cases() {
        let data = case.data();
        let plan = case.plan();
        let v = validate(&plan.plan, &plan.entities, Some(&data.record_keys()));
        assert!(v.is_empty(), "{}: {v:?}", case.name);
    }
}

#[test]
fn sentence_planning_preserves_propositions() {
    for case in all_cases() {
        let doc = case.plan();
        let expected = proposition_set(&doc.plan, &doc.entities).unwrap();
        for profile in [Profile::Fluent, Profile::Plain] {
            let sentences = plan_sentences(&doc.plan, &doc.entities, profile).unwrap();
            assert_eq!(
                proposition_set(&sentences, &doc.entities).unwrap(),
                expected,
                "{} {profile}",
                case.name
            );
            assert_eq!(
                expand_sentences(&sentences),
                plan_messages(&doc.plan.leaves()),
                "{} {profile}",
                case.name
            );
        }
    }
}

#[test]
fn plain_has_one_sentence_per_leaf_and_fluent_no_more() {
    for case in all_cases() {
        let doc = case.plan();
        let plain = plan_sentences(&doc.plan, &doc.entities, Profile::Plain).unwrap();
        let fluent = plan_sentences(&doc.plan, &doc.entities, Profile::Fluent).unwrap();
        assert_eq!(plain.len(), doc.plan.leaves().len(), "{}", case.name);
        assert!(fluent.len() <= plain.len(), "{}", case.name);
    }
}

#[test]
fn schema_print_parse_round_trip() {
    for case in all_cases() {
        let set = case.schemas();
        let printed = set.to_string();
        assert_eq!(parse_schema_set(&printed).unwrap(), set, "{}", case.name);
    }
}

#[test]
fn traversal_is_deterministic() {
    for case in all_cases() {
        let (set, data) = (case.schemas(), case.data());
        let a = traverse_set(&set, &data, DEFAULT_MAX_VISITS).unwrap();
        let b = traverse_set(&set, &data, DEFAULT_MAX_VISITS).unwrap();
        assert_eq!(a, b, "{}", case.name);
    }
}

#[test]
fn demo_schema_shape() {
    let set = parse_schema_set(&read(&demo_schema())).unwrap();
    assert_eq!(set.main().entry, "start");
    assert_eq!(set.main().nodes.len(), 5);
    assert!(set.get("followup").is_some());
}

/// Expected (subject, verb) per leaf, worked out by hand from the guards and
/// the demo data values.
#[test]
fn one_proposition_per_satisfied_guard() {
    let expected: &[(&str, &[(&str, &str)])] = &[
        // systolic 160 > 140, glucose 60 < 70, temperature 39.2 > 38, pharmacy present
        (
            "demo/black",
            &[
                ("i", "see"),
                ("mrs_black", "have"),
                ("mrs_black", "have"),
                ("mrs_black", "have"),
                ("nurse", "call"),
                ("mrs_black", "go"),
                ("i", "sign"),
            ],
        ),
        // 150 > 140, 85 not < 70, 38.5 > 38, pharmacy present
        (
            "demo/jones",
            &[
                ("i", "see"),
                ("mr_jones", "have"),
                ("mr_jones", "have"),
                ("nurse", "call"),
                ("mr_jones", "go"),
                ("i", "sign"),
            ],
        ),
        // 120 not > 140, 62 < 70, 36.9 not > 38, no pharmacy
        (
            "demo/sam",
            &[
                ("i", "see"),
                ("sam", "have"),
                ("nurse", "call"),
                ("i", "sign"),
            ],
        ),
    ];
    let cases = demo_cases();
    assert_eq!(cases.len(), expected.len());
    for (case, (name, leaves)) in cases.iter().zip(expected) {
        assert_eq!(&case.name, name);
        let doc = case.plan();
        let got: Vec<(&str, &str)> = doc
            .plan
            .leaves()
            .iter()
            .map(|m| (m.subject.as_str(), m.verb.as_str()))
            .collect();
        assert_eq!(&got, leaves, "{name}");
        // Distinct complements make every leaf its own proposition.
        assert_eq!(
            proposition_set(&doc.plan, &doc.entities).unwrap().len(),
            leaves.len()
        );
    }
}

#[test]
fn removing_false_guard_arcs_changes_nothing() {
    for case in demo_cases() {
        let (mut set, data) = (case.schemas(), case.data());
        let before = traverse_set(&set, &data, DEFAULT_MAX_VISITS).unwrap();
        for schema in &mut set.schemas {
            schema.arcs.retain(|a| match &a.guard {
                Some(g) => nlgen::schema::eval_condition(g, &data).unwrap(),
                None => true,
            });
        }
        assert_eq!(
            traverse_set(&set, &data, DEFAULT_MAX_VISITS).unwrap(),
            before,
            "{}",
            case.name
        );
    }
}

#[test]
fn stage_dumps_round_trip_through_json() {
    for case in all_cases() {
        let doc = case.plan();
        let json = nlgen::ir::to_canonical_json(&doc);
        let back: PlanDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(nlgen::ir::to_canonical_json(&back), json);
        let sentences = SentenceDocument {
            entities: doc.entities.clone(),
            sentences: plan_sentences(&doc.plan, &doc.entities, Profile::Fluent).unwrap(),
        };
        let json = nlgen::ir::to_canonical_json(&sentences);
        assert_eq!(
            serde_json::from_str::<SentenceDocument>(&json).unwrap(),
            sentences
        );
    }
}

#[test]
fn deleting_an_entity_breaks_referential_integrity() {
    let doc = example_case("sam").plan();
    let mut entities = doc.entities.clone();
    entities.remove(&"sam".into());
    let v = validate(&doc.plan, &entities, None);
    assert!(!v.is_empty());
    assert!(v
        .iter()
        .all(|x| x.rule == nlgen::ir::Rule::ReferentialIntegrity));
    assert!(proposition_set(&doc.plan, &entities).is_err());
}
