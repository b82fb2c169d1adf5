use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::syntax::{code_formula, CoreFormula};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AbstractionKind {
    /// εF: the search used extensional equality.
    Extension,
    /// #F: the search used equinumerosity.
    Number,
    /// αF for any other class equivalence, named by its descriptor.
    Abstraction(String),
}

impl fmt::Display for AbstractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractionKind::Extension => f.write_str("extension"),
            AbstractionKind::Number => f.write_str("number"),
            AbstractionKind::Abstraction(d) => write!(f, "abstraction[{d}]"),
        }
    }
}

/// The pair ⟨code of ψₙ, u⟩ produced by an abstraction operator, together
/// with its unpacked parts.
///
/// There is deliberately no `PartialEq`: objects from different universes are
/// not comparable, so comparison goes through [`AbstractionObject::same_as`].
#[derive(Clone, Debug)]
pub struct AbstractionObject {
    pub index: u64,
    pub formula: CoreFormula,
    /// The minimal-rank working parameters, ascending.
    pub params: Vec<HfSet>,
    pub kind: AbstractionKind,
    pub universe: String,
    hf: HfSet,
}

/// JSON shape of an [`AbstractionObject`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractionJson {
    pub kind: String,
    pub universe: String,
    pub index: u64,
    pub formula: String,
    pub params: Vec<String>,
    pub hf: String,
}

impl AbstractionObject {
    pub fn new(
        index: u64,
        formula: CoreFormula,
        params: Vec<HfSet>,
        kind: AbstractionKind,
        universe: String,
    ) -> AbstractionObject {
        let hf = HfSet::kuratowski_pair(&code_formula(&formula), &HfSet::from_members(params.iter().cloned()));
        AbstractionObject { index, formula, params, kind, universe, hf }
    }

    pub fn as_hfset(&self) -> &HfSet {
        &self.hf
    }

    /// Identity of the underlying sets; fails for objects of different universes.
    pub fn same_as(&self, other: &AbstractionObject) -> Result<bool> {
        if self.universe != other.universe {
            return Err(Error::CrossUniverse { left: self.universe.clone(), right: other.universe.clone() });
        }
        Ok(self.hf == other.hf)
    }

    pub fn to_json(&self) -> AbstractionJson {
        AbstractionJson {
            kind: self.kind.to_string(),
            universe: self.universe.clone(),
            index: self.index,
            formula: self.formula.to_string(),
            params: self.params.iter().map(|p| p.to_string()).collect(),
            hf: self.hf.to_string(),
        }
    }
}

impl fmt::Display for AbstractionObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{} over {}: psi_{} = {} with u = {{{}}}",
            self.kind,
            self.universe,
            self.index,
            self.formula,
            params.join(", ")
        )
    }
}
