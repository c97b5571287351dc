//! Single-line tokenizer.

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Eq,
    EqEq,
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Plus,
    Minus,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(v) => format!("number `{v}`"),
            Tok::Str(_) => "string".to_owned(),
            Tok::Eq => "`=`".to_owned(),
            Tok::EqEq => "`==`".to_owned(),
            Tok::LParen => "`(`".to_owned(),
            Tok::RParen => "`)`".to_owned(),
            Tok::Comma => "`,`".to_owned(),
            Tok::Dot => "`.`".to_owned(),
            Tok::Tilde => "`~`".to_owned(),
            Tok::Plus => "`+`".to_owned(),
            Tok::Minus => "`-`".to_owned(),
            Tok::End => "end of line".to_owned(),
        }
    }
}

/// A token with its 1-based character column.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue)
}

pub(crate) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, expected: &[&str], found: String| ParseError {
        line: line_no,
        column: col,
        expected: expected.iter().map(|s| (*s).to_owned()).collect(),
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '~' => Some(Tok::Tilde),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            i += 1;
            continue;
        }
        if c == '=' {
            if chars.get(i + 1) == Some(&'=') {
                out.push(Spanned {
                    tok: Tok::EqEq,
                    col,
                });
                i += 2;
            } else {
                out.push(Spanned { tok: Tok::Eq, col });
                i += 1;
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if matches!(chars.get(i), Some('e') | Some('E')) {
                let mut j = i + 1;
                if matches!(chars.get(j), Some('+') | Some('-')) {
                    j += 1;
                }
                if chars.get(j).is_some_and(char::is_ascii_digit) {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    let found = chars
                        .get(j)
                        .map_or("end of line".to_owned(), |c| format!("`{c}`"));
                    return Err(err(j + 1, &["exponent digits"], found));
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().expect("lexed decimal literal");
            if !value.is_finite() {
                return Err(err(col, &["finite number"], format!("`{text}`")));
            }
            if chars.get(i).is_some_and(|&c| is_ident_start(c) || c == '.') {
                return Err(err(
                    i + 1,
                    &["delimiter after number"],
                    format!("`{}`", chars[i]),
                ));
            }
            out.push(Spanned {
                tok: Tok::Number(value),
                col,
            });
            continue;
        }
        if c == '"' {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err(i + 1, &["`\"`"], "end of line".to_owned())),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        let esc = match chars.get(i + 1) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('r') => '\r',
                            other => {
                                let found =
                                    other.map_or("end of line".to_owned(), |c| format!("`\\{c}`"));
                                return Err(err(i + 1, &["escape sequence"], found));
                            }
                        };
                        s.push(esc);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push(Spanned {
                tok: Tok::Str(s),
                col,
            });
            continue;
        }
        return Err(err(col, &["token"], format!("`{c}`")));
    }
    out.push(Spanned {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}
