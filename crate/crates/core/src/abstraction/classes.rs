use crate::abstraction::equivalence::ClassEquivalence;
use crate::abstraction::object::{AbstractionKind, AbstractionObject};
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{core_extension, first_equivalent_search, surface_extension, ClassExtension, Env, Point, Universe};
use crate::syntax::{decode_formula, index_of_u64, parse, CoreFormula, Formula};

/// A class given by a formula in one object variable plus parameter values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub formula: Formula,
    /// The variable the class ranges over; `x` unless set otherwise.
    pub object: String,
    pub env: Env,
}

impl Presentation {
    pub fn new(formula: Formula, env: Env) -> Presentation {
        Presentation { formula, object: "x".into(), env }
    }

    pub fn parse(src: &str, env: Env) -> Result<Presentation> {
        Ok(Presentation::new(parse(src)?, env))
    }

    pub fn with_object(mut self, name: &str) -> Presentation {
        self.object = name.to_string();
        self
    }

    /// Free names other than the object variable.
    pub fn parameters(&self) -> Vec<String> {
        self.formula.free_names().into_iter().filter(|n| *n != self.object).collect()
    }

    /// The parameter values as one set: the single value, or the Kuratowski
    /// tuple of all values in name order, or ∅ when there are none.
    pub fn tupled_parameter(&self) -> Result<HfSet> {
        let values = self
            .parameters()
            .iter()
            .map(|n| self.env.get(n).cloned().ok_or_else(|| Error::UnboundVariable(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(HfSet::tuple(&values))
    }

    pub fn extension(&self, u: &Universe) -> Result<ClassExtension> {
        if !self.formula.is_pure() {
            return Err(Error::NotPure(self.formula.to_string()));
        }
        let mut env = self.env.clone();
        env.remove(&self.object);
        let bits = surface_extension(u, &self.formula, &self.object, &env)?;
        Ok(ClassExtension::new(u, bits))
    }
}

fn kind_for(equiv: &ClassEquivalence) -> AbstractionKind {
    match equiv {
        ClassEquivalence::Extensional => AbstractionKind::Extension,
        ClassEquivalence::Equinumerous => AbstractionKind::Number,
        other => AbstractionKind::Abstraction(other.descriptor()),
    }
}

/// The abstraction object of an already computed class.
pub fn abstraction_of_class(
    u: &Universe,
    class: &ClassExtension,
    equiv: &ClassEquivalence,
    budget: u64,
) -> Result<AbstractionObject> {
    let r = first_equivalent_search(u, class, equiv, budget)?;
    Ok(AbstractionObject::new(r.index, r.formula, r.params, kind_for(equiv), u.name().to_string()))
}

/// εF: the first formula defining F with some parameter, and all such
/// parameters of minimal rank.
pub fn extension_of(u: &Universe, p: &Presentation, budget: u64) -> Result<AbstractionObject> {
    abstraction_of_class(u, &p.extension(u)?, &ClassEquivalence::Extensional, budget)
}

/// #F: the first formula with an equinumerous extension.
pub fn class_number(u: &Universe, p: &Presentation, budget: u64) -> Result<AbstractionObject> {
    abstraction_of_class(u, &p.extension(u)?, &ClassEquivalence::Equinumerous, budget)
}

/// αF for an arbitrary class equivalence.
pub fn class_abstraction(
    u: &Universe,
    equiv: &ClassEquivalence,
    p: &Presentation,
    budget: u64,
) -> Result<AbstractionObject> {
    abstraction_of_class(u, &p.extension(u)?, equiv, budget)
}

/// Outcome of [`blv_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlvReport {
    pub presentations: usize,
    pub pairs: usize,
    /// Pairs whose extensions coincide.
    pub equal_extensions: usize,
    /// Distinct extension objects met.
    pub distinct_objects: usize,
    /// Pairs `(i, j)` where object identity and extension identity disagree.
    pub violations: Vec<(usize, usize)>,
}

/// Checks εF = εG ⟺ F = G for every pair of presentations.
pub fn blv_check(u: &Universe, presentations: &[Presentation], budget: u64) -> Result<BlvReport> {
    let mut exts = Vec::with_capacity(presentations.len());
    let mut objs = Vec::with_capacity(presentations.len());
    for p in presentations {
        let e = p.extension(u)?;
        objs.push(abstraction_of_class(u, &e, &ClassEquivalence::Extensional, budget)?);
        exts.push(e);
    }
    let mut report = BlvReport {
        presentations: presentations.len(),
        pairs: 0,
        equal_extensions: 0,
        distinct_objects: objs.iter().map(|o| o.as_hfset().clone()).collect::<std::collections::HashSet<_>>().len(),
        violations: Vec::new(),
    };
    for i in 0..objs.len() {
        for j in i + 1..objs.len() {
            report.pairs += 1;
            let same_ext = exts[i] == exts[j];
            if same_ext {
                report.equal_extensions += 1;
            }
            if objs[i].same_as(&objs[j])? != same_ext {
                report.violations.push((i, j));
            }
        }
    }
    Ok(report)
}

/// Decoded content of a set recognized as an extension object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedExtension {
    pub index: u64,
    pub formula: CoreFormula,
    pub params: Vec<HfSet>,
    pub extension: ClassExtension,
}

/// Recognizes sets of the form εF over `u`: a pair of a formula code and a
/// nonempty uniform-rank parameter set inside `u`, all defining one class,
/// and minimal in the sense that rerunning the search reproduces them.
///
/// Errors from the rerun (budget exhaustion) also count as a negative answer.
pub fn is_extension(u: &Universe, candidate: &HfSet, budget: u64) -> Option<DecodedExtension> {
    let (code, pset) = candidate.unpair().ok()?;
    let formula = decode_formula(&code).ok()?;
    let index = index_of_u64(&formula).ok()??;
    if index > budget || pset.is_empty() {
        return None;
    }
    let params = pset.members().to_vec();
    let rank = params[0].rank();
    if params.iter().any(|p| p.rank() != rank || !u.contains(p)) {
        return None;
    }
    let bits = core_extension(u, &formula, &Point::of(u, &params[0]));
    if params[1..].iter().any(|p| core_extension(u, &formula, &Point::of(u, p)) != bits) {
        return None;
    }
    let extension = ClassExtension::new(u, bits);
    let rerun = first_equivalent_search(u, &extension, &ClassEquivalence::Extensional, budget).ok()?;
    if rerun.index != index || rerun.params != params {
        return None;
    }
    Some(DecodedExtension { index, formula, params, extension })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_BUDGET;
    use crate::syntax::{code_formula, enumerate_u64};

    fn pres(src: &str, binds: &[(&str, u64)]) -> Presentation {
        let env = binds.iter().map(|(k, v)| (k.to_string(), HfSet::from_ackermann_index(*v))).collect();
        Presentation::parse(src, env).unwrap()
    }

    #[test]
    fn same_class_same_object() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let a = extension_of(&v3, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap();
        let b = extension_of(&v3, &pres("not not x = x", &[]), DEFAULT_BUDGET).unwrap();
        // ∅ contains nothing, so "not x in $p" is universal at p = ∅.
        let c = extension_of(&v3, &pres("not x in $p", &[("p", 0)]), DEFAULT_BUDGET).unwrap();
        assert!(a.same_as(&b).unwrap() && a.same_as(&c).unwrap());
        let empty = extension_of(&v3, &pres("x in $p", &[("p", 0)]), DEFAULT_BUDGET).unwrap();
        assert!(!a.same_as(&empty).unwrap());
    }

    #[test]
    fn deterministic_output() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let p = pres("ex y (y in x and y in $q)", &[("q", 3)]);
        let a = extension_of(&v3, &p, DEFAULT_BUDGET).unwrap();
        let b = extension_of(&v3, &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.as_hfset(), b.as_hfset());
    }

    #[test]
    fn cross_universe_comparison_fails() {
        let v2 = Universe::v_stage(2, false).unwrap();
        let v3 = Universe::v_stage(3, false).unwrap();
        let a = extension_of(&v2, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap();
        let b = extension_of(&v3, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap();
        assert!(matches!(a.same_as(&b), Err(Error::CrossUniverse { .. })));
    }

    #[test]
    fn unbound_and_impure_presentations() {
        let v3 = Universe::v_stage(3, false).unwrap();
        assert_eq!(
            extension_of(&v3, &pres("x in q", &[]), DEFAULT_BUDGET).unwrap_err(),
            Error::UnboundVariable("q".into())
        );
        assert!(matches!(extension_of(&v3, &pres("x in #1", &[]), DEFAULT_BUDGET), Err(Error::NotPure(_))));
    }

    #[test]
    fn recognizes_its_own_objects() {
        let v3 = Universe::v_stage(3, false).unwrap();
        for src in ["x = x", "x in $p", "ex y y in x", "not ex y (y in x and ex z z in y)"] {
            let o = extension_of(&v3, &pres(src, &[("p", 3)]), DEFAULT_BUDGET).unwrap();
            let d = is_extension(&v3, o.as_hfset(), DEFAULT_BUDGET).expect(src);
            assert_eq!((d.index, &d.formula, &d.params), (o.index, &o.formula, &o.params));
        }
        assert!(is_extension(&v3, &HfSet::empty(), DEFAULT_BUDGET).is_none());
    }

    #[test]
    fn non_minimal_codes_are_rejected() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let first = extension_of(&v3, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap();
        // Find a later formula defining the same universal class at p = ∅.
        let later = (first.index + 1..2000)
            .map(enumerate_u64)
            .find(|f| core_extension(&v3, f, &Point::of(&v3, &HfSet::empty())).count_ones() == 4)
            .unwrap();
        let fake = HfSet::kuratowski_pair(&code_formula(&later), &HfSet::singleton(HfSet::empty()));
        assert!(is_extension(&v3, &fake, DEFAULT_BUDGET).is_none());
    }

    #[test]
    fn numbers_follow_cardinality() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let all = class_number(&v3, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap();
        let also_all = class_number(&v3, &pres("not x in x", &[]), DEFAULT_BUDGET).unwrap();
        let none = class_number(&v3, &pres("not x = x", &[]), DEFAULT_BUDGET).unwrap();
        assert!(all.same_as(&also_all).unwrap());
        assert!(!all.same_as(&none).unwrap());
        let one = class_number(&v3, &pres("x in $p", &[("p", 1)]), DEFAULT_BUDGET).unwrap();
        let other_one = class_number(&v3, &pres("x = $p", &[("p", 3)]), DEFAULT_BUDGET).unwrap();
        assert!(one.same_as(&other_one).unwrap());
    }

    #[test]
    fn bad_equivalence_is_reported() {
        let v3 = Universe::v_stage(3, false).unwrap();
        // Overlap is reflexive on nonempty classes and symmetric, but not transitive.
        let overlap = ClassEquivalence::first_order("ex x (x in $F and x in $G)").unwrap();
        let err = class_abstraction(&v3, &overlap, &pres("x = x", &[]), DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::NotEquivalence { .. }), "{err:?}");
    }
}
