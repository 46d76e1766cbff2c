//! Line-oriented tokenizer for schema files.

use super::SchemaError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Num(f64),
    LParen,
    RParen,
    Comma,
    Eq,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Num(n) => format!("number {n}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Tokenizes one line. Everything after an unquoted `#` is a comment.
pub(crate) fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, SchemaError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| SchemaError::Lexical {
        line: line_no,
        column: col,
        message,
    };

    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Token {
                    tok: Tok::LParen,
                    col,
                });
                i += 1;
            }
            ')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    col,
                });
                i += 1;
            }
            ',' => {
                out.push(Token {
                    tok: Tok::Comma,
                    col,
                });
                i += 1;
            }
            '=' => {
                out.push(Token { tok: Tok::Eq, col });
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    col,
                });
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(col, "unterminated string literal".into())),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some(other) => {
                                    return Err(err(i + 1, format!("unknown escape `\\{other}`")))
                                }
                                None => return Err(err(col, "unterminated string literal".into())),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    col,
                });
            }
            c if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<f64>()
                    .map_err(|_| err(col, format!("malformed number `{text}`")))?;
                if i < chars.len() && is_ident_start(chars[i]) {
                    return Err(err(
                        i + 1,
                        format!("unexpected character `{}` after number", chars[i]),
                    ));
                }
                out.push(Token {
                    tok: Tok::Num(n),
                    col,
                });
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(line: &str) -> Vec<Tok> {
        lex_line(line, 1)
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect()
    }

    #[test]
    fn arc_line() {
        assert_eq!(
            toks("arc a -> b when gt(p.x, -1.5) # note"),
            vec![
                Tok::Ident("arc".into()),
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Ident("when".into()),
                Tok::Ident("gt".into()),
                Tok::LParen,
                Tok::Ident("p.x".into()),
                Tok::Comma,
                Tok::Num(-1.5),
                Tok::RParen,
            ]
        );
    }

    #[test]
    fn strings_with_escapes_and_hash() {
        assert_eq!(
            toks(r#""say \"hi\" # not a comment""#),
            vec![Tok::Str("say \"hi\" # not a comment".into())]
        );
    }

    #[test]
    fn errors_carry_columns() {
        match lex_line("node a emit $", 7) {
            Err(SchemaError::Lexical { line, column, .. }) => assert_eq!((line, column), (7, 13)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            lex_line("x \"open", 1),
            Err(SchemaError::Lexical { column: 3, .. })
        ));
    }
}
