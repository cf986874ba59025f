//! Tokens shared by the scalar, expression and context grammars.

use std::fmt;

use thiserror::Error;

/// 1-based line and column.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(line: usize, col: usize) -> Pos {
        Pos { line, col }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{}:{}: syntax error: expected {}, found {found}", pos.line, pos.col, expected.join(" or "))]
    Syntax { pos: Pos, expected: Vec<String>, found: String },
    #[error("{}:{}: {message}", pos.line, pos.col)]
    Semantic { pos: Pos, message: String },
}

impl ParseError {
    pub fn syntax(pos: Pos, expected: &[&str], found: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos, expected: expected.iter().map(|s| s.to_string()).collect(), found: found.into() }
    }

    pub fn semantic(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError::Semantic { pos, message: message.into() }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Semantic { pos, .. } => *pos,
        }
    }
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(String),
    Ident(String),
    Str(String),
    Op(char),
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::Arrow => f.write_str("'->'"),
        }
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits one line (or a quoted scalar) into tokens. `#` starts a comment.
pub fn tokenize(text: &str, origin: Pos) -> ParseResult<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = origin.line;
    let mut col = origin.col;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos::new(line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if is_ident_start(c) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::syntax(pos, &["closing '\"'"], "end of line"));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if "+-*/^()[],=".contains(c) {
            i += 1;
            Tok::Op(c)
        } else {
            return Err(ParseError::syntax(pos, &["number", "name", "operator"], format!("'{c}'")));
        };
        col += i - start;
        out.push((tok, pos));
    }
    Ok(out)
}

/// Cursor over a token slice with position tracking for error messages.
pub struct Cursor<'a> {
    toks: &'a [(Tok, Pos)],
    idx: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [(Tok, Pos)], end: Pos) -> Cursor<'a> {
        Cursor { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    pub fn found(&self) -> String {
        self.peek().map(|t| t.to_string()).unwrap_or_else(|| "end of input".into())
    }

    pub fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t);
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::syntax(self.pos(), expected, self.found())
    }

    pub fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_op(&mut self, c: char) -> ParseResult<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> ParseResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.idx += 1;
                Ok((s.clone(), pos))
            }
            _ => Err(self.error(&[what])),
        }
    }

    pub fn expect_end(&self) -> ParseResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of line"]))
        }
    }

    /// Remaining tokens, consuming them.
    pub fn rest(&mut self) -> &'a [(Tok, Pos)] {
        let r = &self.toks[self.idx.min(self.toks.len())..];
        self.idx = self.toks.len();
        r
    }
}
