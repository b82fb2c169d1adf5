//! Core formulas: connectives ¬, ∧, ∃ over ∈/= atoms, de Bruijn bound
//! variables, and two free slots X (object) and P (parameter).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::ast::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoreTerm {
    X,
    P,
    /// De Bruijn index: 0 is the innermost enclosing ∃.
    Var(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreFormula {
    Mem(CoreTerm, CoreTerm),
    Eq(CoreTerm, CoreTerm),
    Not(Box<CoreFormula>),
    And(Box<CoreFormula>, Box<CoreFormula>),
    Exists(Box<CoreFormula>),
}

/// Alphabet of the Polish serialization. The derived order is the frozen
/// enumeration order: Mem < Eq < Not < And < Exists < X < P < 0 < 1 < ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Mem,
    Eq,
    Not,
    And,
    Exists,
    SlotX,
    SlotP,
    Var(u32),
}

impl Token {
    fn from_term(t: CoreTerm) -> Token {
        match t {
            CoreTerm::X => Token::SlotX,
            CoreTerm::P => Token::SlotP,
            CoreTerm::Var(i) => Token::Var(i),
        }
    }

    fn as_term(self) -> Option<CoreTerm> {
        match self {
            Token::SlotX => Some(CoreTerm::X),
            Token::SlotP => Some(CoreTerm::P),
            Token::Var(i) => Some(CoreTerm::Var(i)),
            _ => None,
        }
    }
}

const VAR_BYTE_BASE: u8 = 7;
const VAR_ESCAPE: u8 = 0xFF;

impl CoreFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: CoreFormula) -> CoreFormula {
        CoreFormula::Not(Box::new(f))
    }

    pub fn and(a: CoreFormula, b: CoreFormula) -> CoreFormula {
        CoreFormula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(f: CoreFormula) -> CoreFormula {
        CoreFormula::Exists(Box::new(f))
    }

    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        self.push_tokens(&mut out);
        out
    }

    fn push_tokens(&self, out: &mut Vec<Token>) {
        match self {
            CoreFormula::Mem(a, b) | CoreFormula::Eq(a, b) => {
                out.push(if matches!(self, CoreFormula::Mem(..)) { Token::Mem } else { Token::Eq });
                out.push(Token::from_term(*a));
                out.push(Token::from_term(*b));
            }
            CoreFormula::Not(f) => {
                out.push(Token::Not);
                f.push_tokens(out);
            }
            CoreFormula::And(a, b) => {
                out.push(Token::And);
                a.push_tokens(out);
                b.push_tokens(out);
            }
            CoreFormula::Exists(f) => {
                out.push(Token::Exists);
                f.push_tokens(out);
            }
        }
    }

    /// Serialized length in tokens.
    pub fn len(&self) -> usize {
        match self {
            CoreFormula::Mem(..) | CoreFormula::Eq(..) => 3,
            CoreFormula::Not(f) | CoreFormula::Exists(f) => 1 + f.len(),
            CoreFormula::And(a, b) => 1 + a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reads a complete well-formed token string.
    pub fn from_tokens(tokens: &[Token]) -> Result<CoreFormula> {
        let mut pos = 0;
        let f = Self::read(tokens, &mut pos, 0)?;
        if pos != tokens.len() {
            return Err(Error::NonCanonical(format!("{} trailing tokens", tokens.len() - pos)));
        }
        Ok(f)
    }

    fn read(tokens: &[Token], pos: &mut usize, depth: u32) -> Result<CoreFormula> {
        let next = |pos: &mut usize| -> Result<Token> {
            let t = tokens.get(*pos).copied().ok_or_else(|| Error::NonCanonical("truncated token string".into()))?;
            *pos += 1;
            Ok(t)
        };
        let term = |pos: &mut usize| -> Result<CoreTerm> {
            let t = next(pos)?;
            match t.as_term() {
                Some(CoreTerm::Var(i)) if i >= depth => {
                    Err(Error::NonCanonical(format!("variable {i} is not bound at depth {depth}")))
                }
                Some(term) => Ok(term),
                None => Err(Error::NonCanonical(format!("expected a term, found {t:?}"))),
            }
        };
        match next(pos)? {
            Token::Mem => Ok(CoreFormula::Mem(term(pos)?, term(pos)?)),
            Token::Eq => Ok(CoreFormula::Eq(term(pos)?, term(pos)?)),
            Token::Not => Ok(CoreFormula::not(Self::read(tokens, pos, depth)?)),
            Token::And => {
                let a = Self::read(tokens, pos, depth)?;
                Ok(CoreFormula::and(a, Self::read(tokens, pos, depth)?))
            }
            Token::Exists => Ok(CoreFormula::exists(Self::read(tokens, pos, depth + 1)?)),
            t => Err(Error::NonCanonical(format!("expected a connective, found {t:?}"))),
        }
    }

    /// Checks that every de Bruijn index is bound.
    pub fn is_well_formed(&self) -> bool {
        CoreFormula::from_tokens(&self.tokens()).is_ok()
    }

    /// One byte per token: 0..=6 for the fixed tokens, 7 + i for variable
    /// `i < 248`, and `0xFF` followed by four little-endian bytes otherwise.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for t in self.tokens() {
            match t {
                Token::Var(i) if i < u32::from(VAR_ESCAPE - VAR_BYTE_BASE) => out.push(VAR_BYTE_BASE + i as u8),
                Token::Var(i) => {
                    out.push(VAR_ESCAPE);
                    out.extend_from_slice(&i.to_le_bytes());
                }
                fixed => out.push(match fixed {
                    Token::Mem => 0,
                    Token::Eq => 1,
                    Token::Not => 2,
                    Token::And => 3,
                    Token::Exists => 4,
                    Token::SlotX => 5,
                    _ => 6,
                }),
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<CoreFormula> {
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let t = match bytes[i] {
                0 => Token::Mem,
                1 => Token::Eq,
                2 => Token::Not,
                3 => Token::And,
                4 => Token::Exists,
                5 => Token::SlotX,
                6 => Token::SlotP,
                VAR_ESCAPE => {
                    let raw: [u8; 4] = bytes
                        .get(i + 1..i + 5)
                        .and_then(|s| s.try_into().ok())
                        .ok_or_else(|| Error::NonCanonical("truncated variable escape".into()))?;
                    i += 4;
                    Token::Var(u32::from_le_bytes(raw))
                }
                b => Token::Var(u32::from(b - VAR_BYTE_BASE)),
            };
            tokens.push(t);
            i += 1;
        }
        CoreFormula::from_tokens(&tokens)
    }

    /// Whether the parameter slot occurs at all.
    pub fn mentions_p(&self) -> bool {
        self.tokens().contains(&Token::SlotP)
    }

    /// Surface rendering with `X` as the variable `object` and `P` as the
    /// parameter `$param`; bound variables are named `v0, v1, ...` by depth.
    pub fn to_surface(&self, object: &str, param: &str) -> Formula {
        let mut names = |depth: u32| {
            let mut k = depth;
            loop {
                let cand = format!("v{k}");
                if cand != object && cand != param {
                    return cand;
                }
                k += 1000;
            }
        };
        self.surface_inner(object, param, &mut Vec::new(), &mut names)
    }

    fn surface_inner(
        &self,
        object: &str,
        param: &str,
        bound: &mut Vec<String>,
        names: &mut dyn FnMut(u32) -> String,
    ) -> Formula {
        let term = |t: &CoreTerm, bound: &Vec<String>| match t {
            CoreTerm::X => Term::var(object),
            CoreTerm::P => Term::param(param),
            CoreTerm::Var(i) => Term::Var(bound[bound.len() - 1 - *i as usize].clone()),
        };
        match self {
            CoreFormula::Mem(a, b) => Formula::Mem(term(a, bound), term(b, bound)),
            CoreFormula::Eq(a, b) => Formula::Eq(term(a, bound), term(b, bound)),
            CoreFormula::Not(f) => Formula::not(f.surface_inner(object, param, bound, names)),
            CoreFormula::And(a, b) => {
                Formula::and(a.surface_inner(object, param, bound, names), b.surface_inner(object, param, bound, names))
            }
            CoreFormula::Exists(f) => {
                let v = names(bound.len() as u32);
                bound.push(v.clone());
                let body = f.surface_inner(object, param, bound, names);
                bound.pop();
                Formula::Exists(v, Box::new(body))
            }
        }
    }
}

impl fmt::Display for CoreFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_surface("x", "p"))
    }
}

/// Translates a pure formula into the core language, mapping `object_var` to
/// X and `param_var` to P. Both `name` and `$name` occurrences count.
pub fn normalize(f: &Formula, object_var: &str, param_var: &str) -> Result<CoreFormula> {
    if !f.is_pure() {
        return Err(Error::NotPure(f.to_string()));
    }
    norm(f, object_var, param_var, &mut Vec::new())
}

fn norm(f: &Formula, x: &str, p: &str, bound: &mut Vec<String>) -> Result<CoreFormula> {
    let term = |t: &Term, bound: &Vec<String>| -> Result<CoreTerm> {
        match t {
            Term::Var(v) => {
                if let Some(pos) = bound.iter().rposition(|b| b == v) {
                    return Ok(CoreTerm::Var((bound.len() - 1 - pos) as u32));
                }
                slot(v, x, p)
            }
            Term::Param(v) => slot(v, x, p),
            _ => Err(Error::NotPure(t.to_string())),
        }
    };
    Ok(match f {
        Formula::Mem(a, b) => CoreFormula::Mem(term(a, bound)?, term(b, bound)?),
        Formula::Eq(a, b) => CoreFormula::Eq(term(a, bound)?, term(b, bound)?),
        Formula::Not(g) => CoreFormula::not(norm(g, x, p, bound)?),
        Formula::And(a, b) => CoreFormula::and(norm(a, x, p, bound)?, norm(b, x, p, bound)?),
        // a ∨ b  ≡  ¬(¬a ∧ ¬b)
        Formula::Or(a, b) => CoreFormula::not(CoreFormula::and(
            CoreFormula::not(norm(a, x, p, bound)?),
            CoreFormula::not(norm(b, x, p, bound)?),
        )),
        // a → b  ≡  ¬(a ∧ ¬b)
        Formula::Implies(a, b) => {
            CoreFormula::not(CoreFormula::and(norm(a, x, p, bound)?, CoreFormula::not(norm(b, x, p, bound)?)))
        }
        Formula::Iff(a, b) => {
            let (na, nb) = (norm(a, x, p, bound)?, norm(b, x, p, bound)?);
            CoreFormula::and(
                CoreFormula::not(CoreFormula::and(na.clone(), CoreFormula::not(nb.clone()))),
                CoreFormula::not(CoreFormula::and(nb, CoreFormula::not(na))),
            )
        }
        // ∀v φ  ≡  ¬∃v ¬φ
        Formula::ForAll(v, g) => {
            bound.push(v.clone());
            let body = norm(g, x, p, bound);
            bound.pop();
            CoreFormula::not(CoreFormula::exists(CoreFormula::not(body?)))
        }
        Formula::Exists(v, g) => {
            bound.push(v.clone());
            let body = norm(g, x, p, bound);
            bound.pop();
            CoreFormula::exists(body?)
        }
    })
}

fn slot(name: &str, x: &str, p: &str) -> Result<CoreTerm> {
    if name == x {
        Ok(CoreTerm::X)
    } else if name == p {
        Ok(CoreTerm::P)
    } else {
        Err(Error::UnboundVariable(name.to_string()))
    }
}
