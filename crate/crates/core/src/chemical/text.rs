//! Line-oriented text form of a [`ChemSystem`]:
//!
//! ```text
//! ATOM <id> <name>
//! FIELD <atom-id> <field> <tag>:<value>
//! BOND <from> <to>
//! ```
//!
//! Names and text values are written bare when they are non-empty and free
//! of whitespace and `:`; otherwise they are length-prefixed as
//! `<byte-len>:<bytes>`, which may span lines. Blank lines and lines starting
//! with `#` are ignored. Value encodings: `null:`, `bool:true`, `int:-3`,
//! `real:1.5`, `text:<token>`, `blob:<hex>`, `ref:<id>`, and
//! `list:<n>` followed by `n` space-separated values.

use std::fmt::Write as _;

use indexmap::IndexMap;
use thiserror::Error;

use super::{AtomId, ChemSystem, Electron};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Appends `s` as a bare or length-prefixed token.
pub(crate) fn write_token(out: &mut String, s: &str) {
    if !s.is_empty() && !s.contains(':') && !s.chars().any(char::is_whitespace) {
        out.push_str(s);
    } else {
        let _ = write!(out, "{}:{}", s.len(), s);
    }
}

fn write_value(out: &mut String, v: &Electron) {
    match v {
        Electron::Null => out.push_str("null:"),
        Electron::Bool(b) => {
            let _ = write!(out, "bool:{b}");
        }
        Electron::Int(i) => {
            let _ = write!(out, "int:{i}");
        }
        Electron::Real(r) => {
            let _ = write!(out, "real:{r:?}");
        }
        Electron::Text(s) => {
            out.push_str("text:");
            write_token(out, s);
        }
        Electron::Blob(b) => {
            out.push_str("blob:");
            for byte in b {
                let _ = write!(out, "{byte:02x}");
            }
        }
        Electron::List(items) => {
            let _ = write!(out, "list:{}", items.len());
            for item in items {
                out.push(' ');
                write_value(out, item);
            }
        }
        Electron::AtomRef(id) => {
            let _ = write!(out, "ref:{id}");
        }
    }
}

pub(crate) fn serialize(sys: &ChemSystem) -> String {
    let mut out = String::new();
    for atom in sys.atoms() {
        let _ = write!(out, "ATOM {} ", atom.id());
        write_token(&mut out, atom.name());
        out.push('\n');
        for (name, value) in atom.fields() {
            let _ = write!(out, "FIELD {} ", atom.id());
            write_token(&mut out, name);
            out.push(' ');
            write_value(&mut out, value);
            out.push('\n');
        }
    }
    for atom in sys.atoms() {
        for to in atom.bonds() {
            let _ = writeln!(out, "BOND {} {}", atom.id(), to);
        }
    }
    out
}

/// Byte cursor that tracks the current line number.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0, line: 1 }
    }

    pub(crate) fn line(&self) -> usize {
        self.line
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn advance(&mut self, n: usize) -> &'a str {
        let s = &self.src[self.pos..self.pos + n];
        self.line += s.bytes().filter(|&b| b == b'\n').count();
        self.pos += n;
        s
    }

    /// Skips blank lines and `#` comment lines.
    pub(crate) fn skip_blank_lines(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let line_end = rest.find('\n').map(|i| i + 1).unwrap_or(rest.len());
            let line = &rest[..line_end];
            let trimmed = line.trim();
            if !rest.is_empty() && (trimmed.is_empty() || trimmed.starts_with('#')) {
                self.advance(line_end);
            } else {
                return;
            }
        }
    }

    pub(crate) fn expect_space(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(b' ') => {
                self.advance(1);
                Ok(())
            }
            _ => Err(self.err("expected a space")),
        }
    }

    /// Consumes optional trailing spaces/CR and the newline ending a record.
    pub(crate) fn end_of_record(&mut self) -> Result<(), ParseError> {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r')) {
            self.advance(1);
        }
        match self.peek() {
            None => Ok(()),
            Some(b'\n') => {
                self.advance(1);
                Ok(())
            }
            Some(_) => Err(self.err("unexpected trailing content")),
        }
    }

    /// A run of non-whitespace bytes.
    pub(crate) fn word(&mut self) -> Result<&'a str, ParseError> {
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
        if n == 0 {
            return Err(self.err("expected a word"));
        }
        Ok(self.advance(n))
    }

    /// Characters up to (not including) `stop`.
    fn until(&mut self, stop: char) -> Result<&'a str, ParseError> {
        let rest = &self.src[self.pos..];
        match rest.find(stop) {
            Some(n) => Ok(self.advance(n)),
            None => Err(self.err(format!("expected '{stop}'"))),
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("bad {what} {w:?}")))
    }

    /// Bare or length-prefixed token.
    pub(crate) fn token(&mut self) -> Result<String, ParseError> {
        let rest = &self.src[self.pos..];
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 && rest.as_bytes().get(digits) == Some(&b':') {
            let len: usize = rest[..digits]
                .parse()
                .map_err(|_| self.err("bad length prefix"))?;
            self.advance(digits + 1);
            let end = self.pos + len;
            if end > self.src.len() || !self.src.is_char_boundary(end) {
                return Err(self.err(format!("length prefix {len} overruns input")));
            }
            return Ok(self.advance(len).to_owned());
        }
        Ok(self.word()?.to_owned())
    }

    fn value(&mut self) -> Result<Electron, ParseError> {
        let tag = self.until(':')?;
        self.advance(1);
        let bare = |c: &mut Self| -> &'a str {
            let rest = &c.src[c.pos..];
            let n = rest.find(|ch: char| ch.is_whitespace()).unwrap_or(rest.len());
            c.advance(n)
        };
        Ok(match tag {
            "null" => Electron::Null,
            "bool" => match bare(self) {
                "true" => Electron::Bool(true),
                "false" => Electron::Bool(false),
                other => return Err(self.err(format!("bad bool {other:?}"))),
            },
            "int" => {
                let w = bare(self);
                Electron::Int(w.parse().map_err(|_| self.err(format!("bad int {w:?}")))?)
            }
            "real" => {
                let w = bare(self);
                Electron::Real(w.parse().map_err(|_| self.err(format!("bad real {w:?}")))?)
            }
            "text" => Electron::Text(self.token()?),
            "blob" => {
                let w = bare(self);
                if w.len() % 2 != 0 {
                    return Err(self.err("odd-length blob"));
                }
                let bytes = (0..w.len())
                    .step_by(2)
                    .map(|i| u8::from_str_radix(&w[i..i + 2], 16))
                    .collect::<Result<Vec<u8>, _>>()
                    .map_err(|_| self.err("bad blob hex"))?;
                Electron::Blob(bytes)
            }
            "ref" => {
                let w = bare(self);
                Electron::AtomRef(AtomId(w.parse().map_err(|_| self.err(format!("bad ref {w:?}")))?))
            }
            "list" => {
                let w = bare(self);
                let n: usize = w.parse().map_err(|_| self.err(format!("bad list length {w:?}")))?;
                let mut items = Vec::with_capacity(n.min(1024));
                for _ in 0..n {
                    self.expect_space()?;
                    items.push(self.value()?);
                }
                Electron::List(items)
            }
            other => return Err(self.err(format!("unknown tag {other:?}"))),
        })
    }
}

pub(crate) fn deserialize(input: &str) -> Result<ChemSystem, ParseError> {
    let mut cur = Cursor::new(input);
    let mut order: Vec<(AtomId, String, IndexMap<String, Electron>)> = Vec::new();
    let mut index: std::collections::HashMap<AtomId, usize> = Default::default();
    let mut bonds: Vec<(usize, AtomId, AtomId)> = Vec::new();
    loop {
        cur.skip_blank_lines();
        if cur.at_end() {
            break;
        }
        let line = cur.line();
        match cur.word()? {
            "ATOM" => {
                cur.expect_space()?;
                let id = AtomId(cur.number("atom id")?);
                cur.expect_space()?;
                let name = cur.token()?;
                cur.end_of_record()?;
                if index.insert(id, order.len()).is_some() {
                    return Err(ParseError {
                        line,
                        message: format!("duplicate atom id {id}"),
                    });
                }
                order.push((id, name, IndexMap::new()));
            }
            "FIELD" => {
                cur.expect_space()?;
                let id = AtomId(cur.number("atom id")?);
                cur.expect_space()?;
                let field = cur.token()?;
                cur.expect_space()?;
                let value = cur.value()?;
                cur.end_of_record()?;
                let slot = *index.get(&id).ok_or_else(|| ParseError {
                    line,
                    message: format!("field for unknown atom {id}"),
                })?;
                if order[slot].2.insert(field.clone(), value).is_some() {
                    return Err(ParseError {
                        line,
                        message: format!("duplicate field {field:?} on atom {id}"),
                    });
                }
            }
            "BOND" => {
                cur.expect_space()?;
                let from = AtomId(cur.number("atom id")?);
                cur.expect_space()?;
                let to = AtomId(cur.number("atom id")?);
                cur.end_of_record()?;
                bonds.push((line, from, to));
            }
            other => {
                return Err(ParseError {
                    line,
                    message: format!("unknown record {other:?}"),
                })
            }
        }
    }
    let mut sys = ChemSystem::new();
    for (id, name, fields) in order {
        sys.insert_with_id(id, name, fields);
    }
    for (line, from, to) in bonds {
        sys.bond(from, to).map_err(|e| ParseError {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(sys)
}
