#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use nlgen::cli::{plan_document, realize_text, sentence_document};
use nlgen::ir::{
    ComplementPhrase, HeadSpec, Message, PhraseHead, PhraseSpec, PlanDocument, SentencePlan,
};
use nlgen::lexicon::Lexicon;
use nlgen::realize::TemplateSet;
use nlgen::schema::{parse_schema_set, DataRecordSet, SchemaSet};
use nlgen::sentplan::Profile;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    root().join("tests/fixtures")
}

/// One schema + data pair, with the expected fluent text when known.
#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub schema: PathBuf,
    pub data: PathBuf,
    pub expected_fluent: PathBuf,
    pub expected_plain: Option<PathBuf>,
}

impl Case {
    pub fn schemas(&self) -> SchemaSet {
        parse_schema_set(&read(&self.schema)).expect("corpus schema parses")
    }

    pub fn data(&self) -> DataRecordSet {
        DataRecordSet::from_json(&read(&self.data)).expect("corpus data parses")
    }

    pub fn plan(&self) -> PlanDocument {
        plan_document(&self.schemas(), &self.data()).expect("corpus traverses")
    }

    pub fn generate(&self, profile: Profile) -> String {
        let sentences = sentence_document(&self.plan(), profile).expect("sentence planning");
        realize_text(&sentences, &Lexicon::embedded(), &TemplateSet::embedded())
            .expect("realization")
    }
}

pub fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn example_case(name: &str) -> Case {
    let dir = fixtures().join("corpus").join(name);
    Case {
        name: name.to_string(),
        schema: dir.join("schema.nlg"),
        data: dir.join("data.json"),
        expected_fluent: dir.join("expected.txt"),
        expected_plain: None,
    }
}

pub const EXAMPLES: &[&str] = &["sam", "mrs_black", "conditional", "john"];

pub fn demo_schema() -> PathBuf {
    root().join("demo/patient_report.nlg")
}

/// The demo schema run over every demo data file.
pub fn demo_cases() -> Vec<Case> {
    let mut files: Vec<PathBuf> = fs::read_dir(root().join("demo/data"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|data| {
            let stem = data.file_stem().unwrap().to_string_lossy().into_owned();
            let golden = fixtures().join("golden");
            Case {
                name: format!("demo/{stem}"),
                schema: demo_schema(),
                data,
                expected_fluent: golden.join(format!("{stem}.fluent.txt")),
                expected_plain: Some(golden.join(format!("{stem}.plain.txt"))),
            }
        })
        .collect()
}

pub fn all_cases() -> Vec<Case> {
    let mut cases: Vec<Case> = EXAMPLES.iter().map(|n| example_case(n)).collect();
    cases.extend(demo_cases());
    cases
}

/// Non-comment, non-blank lines split on tabs.
pub fn tsv(name: &str) -> Vec<Vec<String>> {
    read(&fixtures().join("oracles").join(name))
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

fn phrase_back(p: &PhraseSpec) -> ComplementPhrase {
    ComplementPhrase {
        kind: p.kind,
        preposition: p.preposition.clone(),
        determiner: p.determiner,
        premodifiers: p.premodifiers.clone(),
        head: match &p.head {
            HeadSpec::Noun(n) => PhraseHead::Noun(n.clone()),
            HeadSpec::Entity(r) => PhraseHead::Entity(r.entity.clone()),
        },
        number: p.number,
    }
}

fn clause_back(c: &nlgen::ir::ClauseSpec) -> Vec<Message> {
    let condition = c.condition.as_deref().map(|cond| {
        let mut ms = clause_back(cond);
        assert_eq!(ms.len(), 1, "conditions are never coordinated");
        Box::new(ms.remove(0))
    });
    c.complements
        .iter()
        .map(|conj| Message {
            subject: c.subject.entity.clone(),
            verb: c.verb.lemma.clone(),
            adverbs: c.verb.adverbs.clone(),
            complements: conj.phrases.iter().map(phrase_back).collect(),
            tense: c.verb.tense,
            modal: c.verb.modal,
            polarity: c.verb.polarity,
            condition: condition.clone(),
            source_key: String::new(),
        })
        .collect()
}

fn strip_source(m: &Message) -> Message {
    let mut m = m.clone();
    m.source_key.clear();
    if let Some(c) = &m.condition {
        m.condition = Some(Box::new(strip_source(c)));
    }
    m
}

/// Brute-force oracle: expands every coordination group of every clause back
/// into one message per conjunct. Returned as sorted JSON strings so the
/// comparison is a multiset comparison.
pub fn expand_sentences(sentences: &[SentencePlan]) -> Vec<String> {
    let mut out: Vec<String> = sentences
        .iter()
        .flat_map(|s| s.clauses.iter().flat_map(clause_back))
        .map(|m| serde_json::to_string(&m).unwrap())
        .collect();
    out.sort();
    out
}

/// The leaves of a plan in the same form as [`expand_sentences`].
pub fn plan_messages(leaves: &[&Message]) -> Vec<String> {
    let mut out: Vec<String> = leaves
        .iter()
        .map(|m| serde_json::to_string(&strip_source(m)).unwrap())
        .collect();
    out.sort();
    out
}
