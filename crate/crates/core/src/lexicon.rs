//! English inflection tables: noun plurals, verb paradigms, pronouns and
//! indefinite-article exceptions.
//!
//! Irregular forms live in a tab-separated data file (see `data/lexicon.tsv`);
//! the regular spelling rules are code. A copy of the default file is embedded
//! in the binary.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::ir::{Case, Gender, Number, Person, Tense};

pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("pronoun table has no form for {0}")]
    IncompletePronouns(String),
    #[error("the `be` paradigm is missing `{0}`")]
    IncompleteBe(&'static str),
    #[error("cannot inflect an empty lemma")]
    EmptyLemma,
    #[error("reading lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PronounCase {
    Subjective,
    Objective,
    Reflexive,
}

impl From<Case> for PronounCase {
    fn from(c: Case) -> Self {
        match c {
            Case::Subjective => PronounCase::Subjective,
            Case::Objective => PronounCase::Objective,
        }
    }
}

impl fmt::Display for PronounCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PronounCase::Subjective => "subjective",
            PronounCase::Objective => "objective",
            PronounCase::Reflexive => "reflexive",
        })
    }
}

const PERSONS: [Person; 3] = [Person::First, Person::Second, Person::Third];
const NUMBERS: [Number; 2] = [Number::Singular, Number::Plural];
const GENDERS: [Gender; 3] = [Gender::Masculine, Gender::Feminine, Gender::Neuter];
const CASES: [PronounCase; 3] = [
    PronounCase::Subjective,
    PronounCase::Objective,
    PronounCase::Reflexive,
];

type VerbKey = (String, Person, Number, Tense);
type PronounKey = (Person, Number, Gender, PronounCase);

#[derive(Debug, Clone)]
pub struct Lexicon {
    plurals: HashMap<String, String>,
    verbs: HashMap<VerbKey, String>,
    pronouns: HashMap<PronounKey, String>,
    /// (lowercase word prefix, article), longest prefix first.
    articles: Vec<(String, &'static str)>,
}

#[derive(Clone, Copy)]
enum Section {
    Plurals,
    Verbs,
    Pronouns,
    Articles,
}

fn parse_person(s: &str) -> Option<Vec<Person>> {
    Some(match s {
        "*" => PERSONS.to_vec(),
        "first" | "1" => vec![Person::First],
        "second" | "2" => vec![Person::Second],
        "third" | "3" => vec![Person::Third],
        _ => return None,
    })
}

fn parse_number(s: &str) -> Option<Vec<Number>> {
    Some(match s {
        "*" => NUMBERS.to_vec(),
        "singular" | "sg" => vec![Number::Singular],
        "plural" | "pl" => vec![Number::Plural],
        _ => return None,
    })
}

fn parse_gender(s: &str) -> Option<Vec<Gender>> {
    Some(match s {
        "*" => GENDERS.to_vec(),
        "masculine" => vec![Gender::Masculine],
        "feminine" => vec![Gender::Feminine],
        "neuter" => vec![Gender::Neuter],
        _ => return None,
    })
}

fn parse_tense(s: &str) -> Option<Tense> {
    match s {
        "present" => Some(Tense::Present),
        "past" => Some(Tense::Past),
        "future" => Some(Tense::Future),
        _ => None,
    }
}

fn parse_case(s: &str) -> Option<PronounCase> {
    match s {
        "subjective" => Some(PronounCase::Subjective),
        "objective" => Some(PronounCase::Objective),
        "reflexive" => Some(PronounCase::Reflexive),
        _ => None,
    }
}

impl Lexicon {
    /// The lexicon compiled into the crate.
    pub fn embedded() -> Self {
        Lexicon::parse(DEFAULT_LEXICON).expect("embedded lexicon is well formed")
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lexicon::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon {
            plurals: HashMap::new(),
            verbs: HashMap::new(),
            pronouns: HashMap::new(),
            articles: Vec::new(),
        };
        let mut wildcard_verbs: Vec<(VerbKey, String)> = Vec::new();
        let mut section = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| LexiconError::Parse {
                line: line_no,
                message,
            };
            let trimmed = line.trim();
            if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = Some(match name {
                    "plurals" => Section::Plurals,
                    "verbs" => Section::Verbs,
                    "pronouns" => Section::Pronouns,
                    "articles" => Section::Articles,
                    other => return Err(err(format!("unknown section [{other}]"))),
                });
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            let Some(section) = section else {
                return Err(err("entry outside of a section".into()));
            };
            let want = match section {
                Section::Plurals | Section::Articles => 2,
                Section::Verbs | Section::Pronouns => 5,
            };
            if fields.len() != want || fields.iter().any(|f| f.is_empty()) {
                return Err(err(format!(
                    "expected {want} tab-separated fields, found {}",
                    fields.len()
                )));
            }
            match section {
                Section::Plurals => {
                    lex.plurals
                        .insert(fields[0].to_lowercase(), fields[1].to_string());
                }
                Section::Articles => {
                    let article = match fields[1] {
                        "a" => "a",
                        "an" => "an",
                        other => {
                            return Err(err(format!("article must be `a` or `an`, not `{other}`")))
                        }
                    };
                    lex.articles.push((fields[0].to_lowercase(), article));
                }
                Section::Verbs => {
                    let persons = parse_person(fields[1])
                        .ok_or_else(|| err(format!("bad person `{}`", fields[1])))?;
                    let numbers = parse_number(fields[2])
                        .ok_or_else(|| err(format!("bad number `{}`", fields[2])))?;
                    let tense = parse_tense(fields[3])
                        .ok_or_else(|| err(format!("bad tense `{}`", fields[3])))?;
                    let wildcard = fields[1] == "*" || fields[2] == "*";
                    for &p in &persons {
                        for &n in &numbers {
                            let key = (fields[0].to_string(), p, n, tense);
                            if wildcard {
                                wildcard_verbs.push((key, fields[4].to_string()));
                            } else {
                                lex.verbs.insert(key, fields[4].to_string());
                            }
                        }
                    }
                }
                Section::Pronouns => {
                    let persons = parse_person(fields[0])
                        .ok_or_else(|| err(format!("bad person `{}`", fields[0])))?;
                    let numbers = parse_number(fields[1])
                        .ok_or_else(|| err(format!("bad number `{}`", fields[1])))?;
                    let genders = parse_gender(fields[2])
                        .ok_or_else(|| err(format!("bad gender `{}`", fields[2])))?;
                    let case = parse_case(fields[3])
                        .ok_or_else(|| err(format!("bad case `{}`", fields[3])))?;
                    for &p in &persons {
                        for &n in &numbers {
                            for &g in &genders {
                                lex.pronouns.insert((p, n, g, case), fields[4].to_string());
                            }
                        }
                    }
                }
            }
        }

        for (key, form) in wildcard_verbs {
            lex.verbs.entry(key).or_insert(form);
        }
        lex.articles
            .sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        lex.check()?;
        Ok(lex)
    }

    fn check(&self) -> Result<(), LexiconError> {
        for p in PERSONS {
            for n in NUMBERS {
                for g in GENDERS {
                    for c in CASES {
                        if !self.pronouns.contains_key(&(p, n, g, c)) {
                            return Err(LexiconError::IncompletePronouns(format!(
                                "{p:?}/{n:?}/{g:?}/{c}"
                            )));
                        }
                    }
                }
            }
        }
        let be_forms: Vec<&str> = self
            .verbs
            .iter()
            .filter(|(k, _)| k.0 == "be")
            .map(|(_, v)| v.as_str())
            .collect();
        for form in ["am", "is", "are", "was", "were"] {
            if !be_forms.contains(&form) {
                return Err(LexiconError::IncompleteBe(form));
            }
        }
        Ok(())
    }

    /// Plural of a noun lemma. For multi-word heads ("blood test") only the
    /// last word inflects.
    pub fn pluralize(&self, lemma: &str) -> Result<String, LexiconError> {
        let lemma = lemma.trim();
        if lemma.is_empty() {
            return Err(LexiconError::EmptyLemma);
        }
        if let Some(p) = self.plurals.get(&lemma.to_lowercase()) {
            return Ok(p.clone());
        }
        let (prefix, last) = match lemma.rfind(' ') {
            Some(i) => lemma.split_at(i + 1),
            None => ("", lemma),
        };
        let plural = match self.plurals.get(&last.to_lowercase()) {
            Some(p) => p.clone(),
            None => add_s(last),
        };
        Ok(format!("{prefix}{plural}"))
    }

    /// Inflected verb group. Future forms are two words ("will go").
    pub fn verb_form(&self, lemma: &str, person: Person, number: Number, tense: Tense) -> String {
        if tense == Tense::Future {
            return format!("will {lemma}");
        }
        if let Some(f) = self.verbs.get(&(lemma.to_string(), person, number, tense)) {
            return f.clone();
        }
        match tense {
            Tense::Present if person == Person::Third && number == Number::Singular => add_s(lemma),
            Tense::Present => lemma.to_string(),
            Tense::Past => add_ed(lemma),
            Tense::Future => unreachable!(),
        }
    }

    pub fn pronoun(
        &self,
        person: Person,
        number: Number,
        gender: Gender,
        case: PronounCase,
    ) -> &str {
        // Totality is checked at load time.
        &self.pronouns[&(person, number, gender, case)]
    }

    /// "a" or "an" for the word that follows the article.
    pub fn indefinite_article(&self, next_word: &str) -> &'static str {
        let lower = next_word.to_lowercase();
        if let Some((_, art)) = self
            .articles
            .iter()
            .find(|(prefix, _)| lower.starts_with(prefix.as_str()))
        {
            return art;
        }
        match lower.chars().next() {
            Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
            _ => "a",
        }
    }

    /// Whether `word` is one of the pronoun forms in the table.
    pub fn is_pronoun(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        self.pronouns.values().any(|f| f.to_lowercase() == lower)
    }

    /// Every third-person pronoun form.
    pub fn third_person_pronouns(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .pronouns
            .iter()
            .filter(|(k, _)| k.0 == Person::Third)
            .map(|(_, v)| v.as_str())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Consonant + y at the end of the word.
fn ends_consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    matches!(rev.next(), Some('y'))
        && rev
            .next()
            .is_some_and(|c| c.is_alphabetic() && !is_vowel(c))
}

/// Regular -s suffix shared by noun plurals and third-singular verbs.
fn add_s(word: &str) -> String {
    let lower = word.to_lowercase();
    if ["s", "x", "z", "ch", "sh"]
        .iter()
        .any(|suf| lower.ends_with(suf))
    {
        format!("{word}es")
    } else if ends_consonant_y(&lower) {
        format!("{}ies", &word[..word.len() - 1])
    } else {
        format!("{word}s")
    }
}

fn add_ed(word: &str) -> String {
    let lower = word.to_lowercase();
    if lower.ends_with('e') {
        format!("{word}d")
    } else if ends_consonant_y(&lower) {
        format!("{}ied", &word[..word.len() - 1])
    } else {
        format!("{word}ed")
    }
}
