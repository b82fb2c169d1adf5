//! Diagonal constructions.
//!
//! [`russell_witness`] takes a candidate truth predicate `T(y, x)`, read as
//! "x satisfies the formula coded by y", forms `R(x) = ¬T(x, x)` and its
//! code `r`, and evaluates both `T(r, r)` and `R(r)`: they always differ, so
//! `T` misjudges `R` at `r`.
//!
//! [`russell_escape`] forms the class of elements of a universe that do not
//! fall under the class they are the extension object of, and shows that
//! the extension object of that class lies outside the universe.

use serde::Serialize;

use crate::abstraction::{abstraction_of_class, is_extension, AbstractionJson, AbstractionObject, ClassEquivalence};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{eval, ClassExtension, Env, Universe};
use crate::syntax::{code_formula, normalize, Formula};

/// Variable of a candidate truth predicate holding the formula code.
pub const CODE_VAR: &str = "y";
/// Variable of a candidate truth predicate holding the object.
pub const OBJECT_VAR: &str = "x";

/// Largest universe [`russell_escape`] accepts.
pub const MAX_ESCAPE_UNIVERSE: usize = 4096;

#[derive(Debug)]
pub struct DiagonalWitness {
    /// The candidate predicate, in `y` (code) and `x` (object).
    pub predicate: Formula,
    /// `¬T(x, x)`.
    pub diagonal: Formula,
    /// Code of the normalized diagonal formula.
    pub code: HfSet,
    /// Contains `code` and is transitive.
    pub universe: Universe,
    /// `T(r, r)`.
    pub value_predicate: bool,
    /// `R(r)`.
    pub value_diagonal: bool,
}

/// JSON shape of a [`DiagonalWitness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    #[serde(rename = "T")]
    pub predicate: String,
    #[serde(rename = "R")]
    pub diagonal: String,
    pub r: String,
    pub universe_size: usize,
    #[serde(rename = "value_T")]
    pub value_predicate: bool,
    #[serde(rename = "value_R")]
    pub value_diagonal: bool,
}

impl DiagonalWitness {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            predicate: self.predicate.to_string(),
            diagonal: self.diagonal.to_string(),
            r: self.code.to_string(),
            universe_size: self.universe.len(),
            value_predicate: self.value_predicate,
            value_diagonal: self.value_diagonal,
        }
    }
}

/// Builds the diagonal witness against `predicate` inside the closure of
/// `base` (if any) and the code.
///
/// `$x` and `$y` are read as `x` and `y`; no other free names are allowed.
pub fn russell_witness(predicate: &Formula, base: Option<&Universe>) -> Result<DiagonalWitness> {
    if !predicate.is_pure() {
        return Err(Error::NotPure(predicate.to_string()));
    }
    let predicate = predicate.params_to_vars();
    if let Some(name) = predicate.free_names().into_iter().find(|n| n != CODE_VAR && n != OBJECT_VAR) {
        return Err(Error::UnexpectedFreeName { name, allowed: format!("`{CODE_VAR}` and `{OBJECT_VAR}`") });
    }
    let diagonal = Formula::not(predicate.rename_free(CODE_VAR, OBJECT_VAR));
    let code = code_formula(&normalize(&diagonal, OBJECT_VAR, CODE_VAR)?);
    let mut seeds: Vec<HfSet> = base.map(|u| u.elements().to_vec()).unwrap_or_default();
    seeds.push(code.clone());
    let universe = Universe::closure_of(&seeds)?;
    let both = Env::from([(CODE_VAR.to_string(), code.clone()), (OBJECT_VAR.to_string(), code.clone())]);
    let value_predicate = eval(&universe, &predicate, &both)?;
    let value_diagonal = eval(&universe, &diagonal, &Env::from([(OBJECT_VAR.to_string(), code.clone())]))?;
    if value_predicate == value_diagonal {
        return Err(Error::Invariant(format!("T and R agree at r for T = {predicate}")));
    }
    Ok(DiagonalWitness { predicate, diagonal, code, universe, value_predicate, value_diagonal })
}

/// Evidence that a set is not an element of a universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Absence {
    /// Where the set would sit in the universe's Ackermann-ordered element list.
    pub insertion_point: usize,
    /// The neighbors at that position, which differ from the set.
    pub below: Option<String>,
    pub above: Option<String>,
    pub rank: u32,
    pub universe_max_rank: u32,
}

#[derive(Debug)]
pub struct EscapeResult {
    /// Elements not falling under the class they are the extension object of.
    pub class: ClassExtension,
    /// Extension object of `class`.
    pub object: AbstractionObject,
    pub absence: Absence,
}

/// JSON shape of an [`EscapeResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EscapeJson {
    pub universe: String,
    pub universe_size: usize,
    pub class_size: usize,
    pub object: AbstractionJson,
    pub absence: Absence,
    pub escaped: bool,
}

impl EscapeResult {
    pub fn to_json(&self, u: &Universe) -> EscapeJson {
        EscapeJson {
            universe: u.name().to_string(),
            universe_size: u.len(),
            class_size: self.class.count(),
            object: self.object.to_json(),
            absence: self.absence.clone(),
            escaped: !u.contains(self.object.as_hfset()),
        }
    }
}

/// The Russell class of `u` with respect to extension objects, and its own
/// extension object, which cannot be an element of `u`: if it were, it
/// would fall under the class exactly when it does not.
pub fn russell_escape(u: &Universe, budget: u64) -> Result<EscapeResult> {
    if u.len() > MAX_ESCAPE_UNIVERSE {
        return Err(Error::UniverseTooLarge { size: u.len(), max: MAX_ESCAPE_UNIVERSE });
    }
    let mut bits = BitSet::new(u.len());
    for (i, x) in u.elements().iter().enumerate() {
        let falls_under_own = is_extension(u, x, budget).is_some_and(|d| d.extension.contains(i));
        if !falls_under_own {
            bits.insert(i);
        }
    }
    let class = ClassExtension::new(u, bits);
    let object = abstraction_of_class(u, &class, &ClassEquivalence::Extensional, budget)?;
    let set = object.as_hfset();
    if u.contains(set) {
        return Err(Error::Invariant(format!("extension object of the Russell class of {} is inside it", u.name())));
    }
    let elements = u.elements();
    let insertion_point = elements.partition_point(|e| e < set);
    let absence = Absence {
        insertion_point,
        below: insertion_point.checked_sub(1).map(|i| elements[i].to_string()),
        above: elements.get(insertion_point).map(|e| e.to_string()),
        rank: set.rank(),
        universe_max_rank: elements.iter().map(HfSet::rank).max().unwrap_or(0),
    };
    Ok(EscapeResult { class, object, absence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_BUDGET;
    use crate::syntax::parse;

    #[test]
    fn membership_predicate_gives_the_russell_class() {
        let w = russell_witness(&parse("x in y").unwrap(), None).unwrap();
        assert_eq!(w.diagonal.to_string(), "not x in x");
        assert!(!w.value_predicate && w.value_diagonal);
        assert!(w.universe.contains(&w.code) && w.universe.is_transitive());
        let j = w.to_json();
        assert_eq!((j.value_predicate, j.value_diagonal), (false, true));
    }

    #[test]
    fn constant_predicate() {
        let w = russell_witness(&parse("y = y").unwrap(), Some(&Universe::v_stage(2, false).unwrap())).unwrap();
        assert!(w.value_predicate && !w.value_diagonal);
        assert!(w.universe.contains(&HfSet::singleton(HfSet::empty())));
    }

    #[test]
    fn bound_variables_are_renamed_apart() {
        // Substituting x for y must not be captured by the inner binder.
        let w = russell_witness(&parse("ex x (x in y and x = x)").unwrap(), None).unwrap();
        assert!(w.diagonal.free_names().contains("x"));
        assert_ne!(w.value_predicate, w.value_diagonal);
    }

    #[test]
    fn predicates_must_be_binary_and_pure() {
        assert!(matches!(
            russell_witness(&parse("x in z").unwrap(), None),
            Err(Error::UnexpectedFreeName { ref name, .. }) if name == "z"
        ));
        assert!(matches!(russell_witness(&parse("x in #1").unwrap(), None), Err(Error::NotPure(_))));
        let w = russell_witness(&parse("$x in $y").unwrap(), None).unwrap();
        assert_eq!(w.diagonal.to_string(), "not x in x");
    }

    #[test]
    fn escape_from_small_universes() {
        for desc in ["v2", "ack:8"] {
            let u = Universe::from_descriptor(desc).unwrap();
            let e = russell_escape(&u, DEFAULT_BUDGET).unwrap();
            assert!(!u.elements().contains(e.object.as_hfset()), "{desc}");
            assert!(e.to_json(&u).escaped);
        }
        let v2 = Universe::v_stage(2, false).unwrap();
        assert!(russell_escape(&v2, DEFAULT_BUDGET).unwrap().absence.rank >= 3);
    }

    #[test]
    fn escape_rejects_large_universes() {
        let u = Universe::ackermann_segment(MAX_ESCAPE_UNIVERSE + 1).unwrap();
        assert!(matches!(russell_escape(&u, DEFAULT_BUDGET), Err(Error::UniverseTooLarge { .. })));
    }
}
