use thiserror::Error;

use super::{Quiver, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Colon,
    Semi,
    Arrow,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

/// Identifier characters. `-` is excluded so `1->2` lexes without spaces;
/// parens, commas, primes and `+` are allowed so labels like `(k+1,j)` or
/// `3''` are single tokens.
fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'\'' | b'(' | b')' | b',' | b'+' | b'.')
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.bump();
            }
            if self.pos < self.src.len() && self.src[self.pos] == b'#' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.bump();
                }
                continue;
            }
            break;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let (line, col) = (self.line, self.col);
        let c = self.src[self.pos];
        let tok = match c {
            b'{' => {
                self.bump();
                Tok::LBrace
            }
            b'}' => {
                self.bump();
                Tok::RBrace
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b';' => {
                self.bump();
                Tok::Semi
            }
            b'-' => {
                self.bump();
                if self.pos < self.src.len() && self.src[self.pos] == b'>' {
                    self.bump();
                    Tok::Arrow
                } else {
                    return Err(self.error("expected `>` after `-`"));
                }
            }
            c if is_ident_char(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            c => return Err(self.error(format!("unexpected character `{}`", c as char))),
        };
        Ok(Some((tok, line, col)))
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.tokens.get(self.pos) {
            Some((t, _, _)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let got = self.next(what)?;
        if got == tok {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next(what)? {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.error(format!("expected {what}")))
            }
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let got = self.expect_ident(&format!("`{kw}`"))?;
        if got == kw {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected `{kw}`, found `{got}`")))
        }
    }
}

pub(super) fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    let end = (lexer.line, lexer.col);
    let mut p = Parser {
        tokens,
        pos: 0,
        end,
    };

    p.expect_keyword("quiver")?;
    let name = p.expect_ident("quiver name")?;
    p.expect(Tok::LBrace, "`{`")?;
    p.expect_keyword("vertices")?;
    p.expect(Tok::Colon, "`:`")?;
    let mut vertices = Vec::new();
    loop {
        match p.peek() {
            Some(Tok::Ident(_)) => vertices.push(p.expect_ident("vertex")?),
            Some(Tok::Semi) => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.error("expected vertex identifier or `;`")),
        }
    }
    if vertices.is_empty() {
        return Err(p.error("at least one vertex is required"));
    }
    p.expect_keyword("arrows")?;
    p.expect(Tok::Colon, "`:`")?;
    let mut arrows = Vec::new();
    loop {
        match p.peek() {
            Some(Tok::RBrace) => {
                p.pos += 1;
                break;
            }
            Some(Tok::Ident(_)) => {
                let label = if matches!(p.peek2(), Some(Tok::Colon)) {
                    let l = p.expect_ident("arrow label")?;
                    p.expect(Tok::Colon, "`:`")?;
                    Some(l)
                } else {
                    None
                };
                let source = p.expect_ident("arrow source")?;
                p.expect(Tok::Arrow, "`->`")?;
                let target = p.expect_ident("arrow target")?;
                p.expect(Tok::Semi, "`;`")?;
                arrows.push((label, source, target));
            }
            _ => return Err(p.error("expected arrow or `}`")),
        }
    }
    if p.peek().is_some() {
        return Err(p.error("trailing input after quiver body"));
    }

    let here = p.end;
    Quiver::new(name, vertices, arrows).map_err(|e| match e {
        QuiverError::DuplicateVertex(v) => ParseError {
            line: here.0,
            col: here.1,
            message: format!("duplicate vertex identifier `{v}`"),
        },
        QuiverError::UndeclaredVertex(v) => ParseError {
            line: here.0,
            col: here.1,
            message: format!("arrow endpoint `{v}` is not a declared vertex"),
        },
    })
}
