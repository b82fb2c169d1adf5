use std::fmt;

use crate::hfset::{read_literal, HfSet};
use crate::syntax::ast::{EpsTerm, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for SyntaxError {}

const KEYWORDS: [&str; 7] = ["not", "all", "ex", "in", "and", "or", "eps"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Param(String),
    Lit(HfSet),
    Kw(&'static str),
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Param(s) => write!(f, "parameter `${s}`"),
            Tok::Lit(s) => write!(f, "literal `{s}`"),
            Tok::Kw(k) | Tok::Sym(k) => write!(f, "`{k}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, expected: &str| SyntaxError {
        offset,
        expected: vec![expected.to_string()],
        found: src[offset..].chars().next().map_or("end of input".into(), |c| format!("`{c}`")),
    };
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if is_ident_start(b) {
            while i < bytes.len() && is_ident_char(bytes[i]) {
                i += 1;
            }
            let word = &src[start..i];
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => out.push((Tok::Kw(k), start)),
                None => out.push((Tok::Ident(word.to_string()), start)),
            }
            continue;
        }
        match b {
            b'$' => {
                i += 1;
                if i >= bytes.len() || !is_ident_start(bytes[i]) {
                    return Err(err(i, "parameter name"));
                }
                while i < bytes.len() && is_ident_char(bytes[i]) {
                    i += 1;
                }
                out.push((Tok::Param(src[start + 1..i].to_string()), start));
            }
            b'{' | b'#' => {
                let (set, end) = read_literal(src, start).map_err(|e| err(e.offset, e.expected))?;
                out.push((Tok::Lit(set), start));
                i = end;
            }
            b'<' if src[i..].starts_with("<->") => {
                out.push((Tok::Sym("<->"), start));
                i += 3;
            }
            b'-' if src[i..].starts_with("->") => {
                out.push((Tok::Sym("->"), start));
                i += 2;
            }
            b'=' | b'(' | b')' | b'[' | b']' | b'|' => {
                let sym = match b {
                    b'=' => "=",
                    b'(' => "(",
                    b')' => ")",
                    b'[' => "[",
                    b']' => "]",
                    _ => "|",
                };
                out.push((Tok::Sym(sym), start));
                i += 1;
            }
            _ => return Err(err(start, "a formula token")),
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Kw(t) if *t == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<(), SyntaxError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{s}`")]))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.eat_sym("<->") {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat_sym("->") {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat_kw("or") {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat_kw("and") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat_kw("not") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat_kw("all") {
            let v = self.ident()?;
            return Ok(Formula::ForAll(v, Box::new(self.unary()?)));
        }
        if self.eat_kw("ex") {
            let v = self.ident()?;
            return Ok(Formula::Exists(v, Box::new(self.unary()?)));
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.term().map_err(|_| {
            self.error(&["`not`", "`all`", "`ex`", "`(`", "identifier", "parameter", "literal", "`eps`"])
        })?;
        if self.eat_kw("in") {
            Ok(Formula::Mem(lhs, self.term()?))
        } else if self.eat_sym("=") {
            Ok(Formula::Eq(lhs, self.term()?))
        } else {
            Err(self.error(&["`in`", "`=`"]))
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Term::Var(s))
            }
            Tok::Param(s) => {
                self.pos += 1;
                Ok(Term::Param(s))
            }
            Tok::Lit(set) => {
                self.pos += 1;
                Ok(Term::Lit(set))
            }
            Tok::Kw("eps") => {
                self.pos += 1;
                self.expect_sym("[")?;
                let var = self.ident()?;
                self.expect_sym("|")?;
                let body = self.formula()?;
                self.expect_sym("]")?;
                Ok(Term::Eps(Box::new(EpsTerm { var, body })))
            }
            _ => Err(self.error(&["identifier", "parameter", "literal", "`eps`"])),
        }
    }
}

/// Parses a surface formula. ε-terms and literals are accepted here; callers
/// that need a pure formula check [`Formula::is_pure`].
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["end of input"]));
    }
    Ok(f)
}
