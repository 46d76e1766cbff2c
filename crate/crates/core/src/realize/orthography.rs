use super::tokens::{Boundary, Mark, Token, TokenStream};
use crate::lexicon::Lexicon;

/// One rewrite over the whole token list.
pub type RewriteRule = fn(Vec<Token>, &Lexicon) -> Vec<Token>;

/// Rules in application order.
pub const RULES: &[(&str, RewriteRule)] = &[
    ("word-shape", word_shape),
    ("boundaries", boundaries),
    ("leading-punctuation", leading_punctuation),
    ("duplicate-punctuation", duplicate_punctuation),
    ("point-absorption", point_absorption),
    ("abbreviation-point", abbreviation_point),
    ("unmarked-boundary", unmarked_boundary),
    ("indefinite-article", indefinite_article),
    ("capitalization", capitalization),
];

/// Splits words on whitespace and drops empty ones.
fn word_shape(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        match t {
            Token::Word { text, proper } => {
                for w in text.split_whitespace() {
                    out.push(Token::Word {
                        text: w.to_string(),
                        proper,
                    });
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// Drops leading boundaries and merges runs of boundaries into the strongest.
fn boundaries(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if let Token::Boundary(b) = t {
            match out.last_mut() {
                None => continue,
                Some(Token::Boundary(prev)) => {
                    *prev = (*prev).max(b);
                    continue;
                }
                Some(_) => {}
            }
        }
        out.push(t);
    }
    out
}

/// Punctuation cannot open a sentence.
fn leading_punctuation(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if matches!(t, Token::Punct(_)) && matches!(out.last(), None | Some(Token::Boundary(_))) {
            continue;
        }
        out.push(t);
    }
    out
}

fn duplicate_punctuation(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if let (Token::Punct(a), Some(Token::Punct(b))) = (&t, out.last()) {
            if a == b {
                continue;
            }
        }
        out.push(t);
    }
    out
}

/// In a run of adjacent marks the strongest survives: ",." becomes ".".
fn point_absorption(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if let (Token::Punct(a), Some(Token::Punct(b))) = (&t, out.last_mut()) {
            if a.strength() > b.strength() {
                *b = *a;
            }
            continue;
        }
        out.push(t);
    }
    out
}

/// A period after a word that already ends in one ("Dr.") is absorbed.
fn abbreviation_point(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if t == Token::Punct(Mark::Period) {
            if let Some(Token::Word { text, .. }) = out.last() {
                if text.ends_with('.') {
                    continue;
                }
            }
        }
        out.push(t);
    }
    out
}

/// A sentence boundary survives only after a terminal mark, the one place
/// the printed text can show it.
fn unmarked_boundary(tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for t in tokens {
        if t == Token::Boundary(Boundary::Sentence)
            && !matches!(out.last(), Some(Token::Punct(m)) if m.is_terminal())
        {
            continue;
        }
        out.push(t);
    }
    out
}

fn indefinite_article(mut tokens: Vec<Token>, lex: &Lexicon) -> Vec<Token> {
    for i in 0..tokens.len().saturating_sub(1) {
        let next = match &tokens[i + 1] {
            Token::Word { text, .. } => text.clone(),
            _ => continue,
        };
        if let Token::Word {
            text,
            proper: false,
        } = &mut tokens[i]
        {
            if text.eq_ignore_ascii_case("a") || text.eq_ignore_ascii_case("an") {
                let article = lex.indefinite_article(&next);
                let upper = text.starts_with(|c: char| c.is_uppercase());
                *text = if upper {
                    capitalize(article)
                } else {
                    article.to_string()
                };
            }
        }
    }
    tokens
}

fn capitalize(w: &str) -> String {
    let mut chars = w.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Sentence-initial words, proper names and "I" start with a capital.
fn capitalization(mut tokens: Vec<Token>, _: &Lexicon) -> Vec<Token> {
    let mut sentence_start = true;
    for t in &mut tokens {
        match t {
            Token::Word { text, proper } => {
                if sentence_start || *proper {
                    *text = capitalize(text);
                } else if text == "i" {
                    *text = "I".into();
                }
                sentence_start = false;
            }
            Token::Punct(m) => sentence_start = m.is_terminal(),
            Token::Boundary(_) => sentence_start = true,
        }
    }
    tokens
}

/// Applies [`RULES`] and lays the tokens out as text: one space between
/// words, none before punctuation, one space between sentences and a blank
/// line between paragraphs. Trailing boundaries produce no text.
pub fn orthography(ts: &TokenStream, lex: &Lexicon) -> String {
    let mut tokens = ts.tokens.clone();
    for (_, rule) in RULES {
        tokens = rule(tokens, lex);
    }
    let mut out = String::new();
    let mut separator = " ";
    for t in &tokens {
        match t {
            Token::Word { text, .. } => {
                if !out.is_empty() {
                    out.push_str(separator);
                }
                out.push_str(text);
                separator = " ";
            }
            Token::Punct(m) => {
                out.push(m.as_char());
                separator = " ";
            }
            Token::Boundary(Boundary::Sentence) => separator = " ",
            Token::Boundary(Boundary::Paragraph) => separator = "\n\n",
        }
    }
    out
}
