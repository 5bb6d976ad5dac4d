//! Tokenizer and cursor shared by the term, proof-term, strategy and theory
//! parsers. Every token remembers its line and column so that diagnostics can
//! point at the offending input.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// `[A-Za-z][A-Za-z0-9_]*` or a run of digits.
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Colon,
    Eq,
    Arrow,
    Slash,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::Slash => "`/`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Returns true when `name` is a legal identifier: alphanumeric words that
/// start with a letter, or plain digit strings.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// Tokenizes `text`. `line` and `column` give the location of the first
/// character, so callers that parse a fragment of a larger file still report
/// file coordinates. A `#` starts a comment running to the end of the line.
pub(crate) fn tokenize(text: &str, line: usize, column: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = line;
    let mut col = column;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let single = |tok| Spanned {
            tok,
            line: start_line,
            column: start_col,
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' | ',' | ';' | '.' | ':' | '/' => {
                chars.next();
                col += 1;
                out.push(single(match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    _ => Tok::Slash,
                }));
            }
            '=' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(single(Tok::Arrow));
                } else {
                    out.push(single(Tok::Eq));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(single(Tok::Ident(word)));
            }
            c if c.is_ascii_digit() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(single(Tok::Ident(word)));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    /// Location reported for errors at end of input.
    end: (usize, usize),
}

impl Cursor {
    pub(crate) fn new(text: &str, line: usize, column: usize) -> Result<Self> {
        let toks = tokenize(text, line, column)?;
        let end = match text.rfind('\n') {
            Some(i) => (line + text.matches('\n').count(), text[i + 1..].chars().count() + 1),
            None => (line, column + text.chars().count()),
        };
        Ok(Cursor { toks, pos: 0, end })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub(crate) fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|s| &s.tok)
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn location(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.column)).unwrap_or(self.end)
    }

    /// Location of the most recently consumed token.
    pub(crate) fn prev_location(&self) -> (usize, usize) {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.toks.get(i))
            .map(|s| (s.line, s.column))
            .unwrap_or(self.end)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.location();
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}
