//! Minimal s-expression reader shared by every file format in the kernel.
//!
//! Atoms are maximal runs of characters other than whitespace, parentheses
//! and `;`. A `;` starts a comment running to the end of the line.

use std::fmt;

use crate::error::{Error, Result};

/// Line/column of a token, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(l, _) => Some(l),
            SExpr::Atom(..) => None,
        }
    }

    /// The head atom of a non-empty list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExpr::as_atom)
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str> {
        self.as_atom()
            .ok_or_else(|| Error::syntax(self.pos(), format!("expected {what}, found a list")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[SExpr]> {
        self.as_list()
            .ok_or_else(|| Error::syntax(self.pos(), format!("expected {what}, found an atom")))
    }

    /// A list whose head is exactly `head`; returns the tail.
    pub fn expect_form(&self, head: &str) -> Result<&[SExpr]> {
        let list = self.expect_list(&format!("({head} ...)"))?;
        match list.first().and_then(SExpr::as_atom) {
            Some(h) if h == head => Ok(&list[1..]),
            _ => Err(Error::syntax(self.pos(), format!("expected ({head} ...)"))),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(a, _) => f.write_str(a),
            SExpr::List(items, _) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<SExpr> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(Error::syntax(start, "unexpected end of input")),
            Some(')') => Err(Error::syntax(start, "unbalanced ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(Error::syntax(start, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(SExpr::Atom(atom, start))
            }
        }
    }
}

/// Reads every toplevel expression of `text`.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>> {
    let mut r = Reader { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one toplevel expression.
pub fn parse_one(text: &str) -> Result<SExpr> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Error::syntax(Pos { line: 1, col: 1 }, "empty document")),
        _ => Err(Error::syntax(all[1].pos(), "expected a single toplevel form")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_comments() {
        let e = parse_one("; header\n(a (b c) ; trailing\n d)").unwrap();
        assert_eq!(e.to_string(), "(a (b c) d)");
        assert_eq!(e.pos(), Pos { line: 2, col: 1 });
    }

    #[test]
    fn reports_position_of_unbalanced_paren() {
        let err = parse_one("(a\n  (b").unwrap_err();
        assert!(err.to_string().contains("2:3"), "{err}");
    }
}
