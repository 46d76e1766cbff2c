use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Comma,
    Period,
    QuestionMark,
}

impl Mark {
    pub fn as_char(&self) -> char {
        match self {
            Mark::Comma => ',',
            Mark::Period => '.',
            Mark::QuestionMark => '?',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            ',' => Some(Mark::Comma),
            '.' => Some(Mark::Period),
            '?' => Some(Mark::QuestionMark),
            _ => None,
        }
    }

    /// Absorption strength: a stronger mark absorbs an adjacent weaker one.
    pub fn strength(&self) -> u8 {
        match self {
            Mark::Comma => 0,
            Mark::Period => 1,
            Mark::QuestionMark => 2,
        }
    }

    pub fn is_terminal(&self) -> bool {
        !matches!(self, Mark::Comma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    Sentence,
    Paragraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    /// `proper` words keep their spelling and are always capitalized.
    Word {
        text: String,
        proper: bool,
    },
    Punct(Mark),
    Boundary(Boundary),
}

impl Token {
    pub fn word(text: impl Into<String>) -> Self {
        Token::Word {
            text: text.into(),
            proper: false,
        }
    }

    pub fn proper(text: impl Into<String>) -> Self {
        Token::Word {
            text: text.into(),
            proper: true,
        }
    }
}

/// Words that keep their final period.
pub const ABBREVIATIONS: &[&str] = &["Dr.", "Mr.", "Mrs.", "Ms.", "St.", "Prof.", "Jr.", "Sr."];

fn is_abbreviation(w: &str) -> bool {
    ABBREVIATIONS.iter().any(|a| a.eq_ignore_ascii_case(w))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn new() -> Self {
        TokenStream::default()
    }

    pub fn push(&mut self, t: Token) {
        self.tokens.push(t);
    }

    /// Pushes one word token per whitespace-separated piece of `text`.
    pub fn words(&mut self, text: &str, proper: bool) {
        for w in text.split_whitespace() {
            self.tokens.push(Token::Word {
                text: w.to_string(),
                proper,
            });
        }
    }

    pub fn extend(&mut self, other: TokenStream) {
        self.tokens.extend(other.tokens);
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Reads finished text back into tokens. Blank lines separate paragraphs;
    /// a period or question mark ends a sentence unless it belongs to an
    /// abbreviation.
    pub fn from_text(text: &str) -> Self {
        let mut ts = TokenStream::new();
        let paragraphs = text.split("\n\n").map(str::trim).filter(|p| !p.is_empty());
        for (i, para) in paragraphs.enumerate() {
            if i > 0 {
                ts.push(Token::Boundary(Boundary::Paragraph));
            }
            for chunk in para.split_whitespace() {
                let mut word = chunk;
                while word.len() > 1 && !is_abbreviation(word) {
                    let Some(mark) = word.chars().next().and_then(Mark::from_char) else {
                        break;
                    };
                    ts.push(Token::Punct(mark));
                    if mark.is_terminal() {
                        ts.push(Token::Boundary(Boundary::Sentence));
                    }
                    word = &word[1..];
                }
                let mut trailing = Vec::new();
                while !is_abbreviation(word) {
                    let Some(mark) = word.chars().last().and_then(Mark::from_char) else {
                        break;
                    };
                    trailing.push(mark);
                    word = &word[..word.len() - 1];
                }
                if !word.is_empty() {
                    ts.push(Token::word(word));
                }
                for mark in trailing.into_iter().rev() {
                    ts.push(Token::Punct(mark));
                    if mark.is_terminal() {
                        ts.push(Token::Boundary(Boundary::Sentence));
                    }
                }
            }
        }
        if !matches!(ts.tokens.last(), None | Some(Token::Boundary(_))) {
            ts.push(Token::Boundary(Boundary::Sentence));
        }
        ts
    }
}

impl fmt::Display for TokenStream {
    /// Debug-style rendering with every token separated by a space.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.tokens {
            let s = match t {
                Token::Word { text, .. } => text.clone(),
                Token::Punct(m) => m.as_char().to_string(),
                Token::Boundary(Boundary::Sentence) => "|".into(),
                Token::Boundary(Boundary::Paragraph) => "||".into(),
            };
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(&s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reparse_splits_punctuation_and_keeps_abbreviations() {
        let ts = TokenStream::from_text("I saw Mrs. Black, twice.\n\nShe left?");
        assert_eq!(
            ts.to_string(),
            "I saw Mrs. Black , twice . | || She left ? |"
        );
    }

    #[test]
    fn abbreviation_followed_by_period() {
        let ts = TokenStream::from_text("by Dr..");
        assert_eq!(ts.to_string(), "by Dr. . |");
    }
}
