//! Structural Gödel coding of core formulas as HF sets.
//!
//! Each node is `pair(vn(tag), payload)` with tags Mem 0, Eq 1, Not 2, And 3,
//! Exists 4, Var 5, X 6, P 7. Binary nodes carry `pair(left, right)`, unary
//! nodes carry the child's code, a variable carries `vn(index)` and the two
//! slots carry ∅.

use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::syntax::core::{CoreFormula, CoreTerm};

const TAG_MEM: usize = 0;
const TAG_EQ: usize = 1;
const TAG_NOT: usize = 2;
const TAG_AND: usize = 3;
const TAG_EXISTS: usize = 4;
const TAG_VAR: usize = 5;
const TAG_X: usize = 6;
const TAG_P: usize = 7;

fn node(tag: usize, payload: HfSet) -> HfSet {
    HfSet::kuratowski_pair(&HfSet::von_neumann(tag), &payload)
}

fn code_term(t: CoreTerm) -> HfSet {
    match t {
        CoreTerm::X => node(TAG_X, HfSet::empty()),
        CoreTerm::P => node(TAG_P, HfSet::empty()),
        CoreTerm::Var(i) => node(TAG_VAR, HfSet::von_neumann(i as usize)),
    }
}

pub fn code_formula(f: &CoreFormula) -> HfSet {
    match f {
        CoreFormula::Mem(a, b) => node(TAG_MEM, HfSet::kuratowski_pair(&code_term(*a), &code_term(*b))),
        CoreFormula::Eq(a, b) => node(TAG_EQ, HfSet::kuratowski_pair(&code_term(*a), &code_term(*b))),
        CoreFormula::Not(g) => node(TAG_NOT, code_formula(g)),
        CoreFormula::And(a, b) => node(TAG_AND, HfSet::kuratowski_pair(&code_formula(a), &code_formula(b))),
        CoreFormula::Exists(g) => node(TAG_EXISTS, code_formula(g)),
    }
}

fn split(c: &HfSet) -> Result<(usize, HfSet)> {
    let (tag, payload) = c.unpair().map_err(|_| Error::Decode(format!("{c} is not a tagged node")))?;
    let tag = tag
        .as_von_neumann()
        .filter(|t| *t <= TAG_P)
        .ok_or_else(|| Error::Decode(format!("{tag} is not a node tag")))?;
    Ok((tag, payload))
}

fn pair_payload(p: &HfSet) -> Result<(HfSet, HfSet)> {
    p.unpair().map_err(|_| Error::Decode(format!("{p} is not a pair payload")))
}

fn decode_term(c: &HfSet, depth: u32) -> Result<CoreTerm> {
    let (tag, payload) = split(c)?;
    match tag {
        TAG_X | TAG_P if payload.is_empty() => Ok(if tag == TAG_X { CoreTerm::X } else { CoreTerm::P }),
        TAG_VAR => {
            let i =
                payload.as_von_neumann().ok_or_else(|| Error::Decode(format!("{payload} is not a variable index")))?;
            if i as u64 >= u64::from(depth) {
                return Err(Error::Decode(format!("variable {i} is unbound at depth {depth}")));
            }
            Ok(CoreTerm::Var(i as u32))
        }
        _ => Err(Error::Decode(format!("tag {tag} with payload {payload} is not a term"))),
    }
}

fn decode_at(c: &HfSet, depth: u32) -> Result<CoreFormula> {
    let (tag, payload) = split(c)?;
    match tag {
        TAG_MEM | TAG_EQ => {
            let (a, b) = pair_payload(&payload)?;
            let (a, b) = (decode_term(&a, depth)?, decode_term(&b, depth)?);
            Ok(if tag == TAG_MEM { CoreFormula::Mem(a, b) } else { CoreFormula::Eq(a, b) })
        }
        TAG_NOT => Ok(CoreFormula::not(decode_at(&payload, depth)?)),
        TAG_AND => {
            let (a, b) = pair_payload(&payload)?;
            Ok(CoreFormula::and(decode_at(&a, depth)?, decode_at(&b, depth)?))
        }
        TAG_EXISTS => Ok(CoreFormula::exists(decode_at(&payload, depth + 1)?)),
        _ => Err(Error::Decode(format!("tag {tag} is not a connective"))),
    }
}

/// Inverse of [`code_formula`]; rejects every set outside its image.
pub fn decode_formula(c: &HfSet) -> Result<CoreFormula> {
    decode_at(c, 0)
}
