//! The least-formula, minimal-rank-parameter search.
//!
//! For each enumeration index `n` and each parameter position `p`, the
//! extension of ψₙ at P := p is computed once per universe and kept in a
//! table. A search walks the table in index order and stops at the first row
//! containing a parameter whose extension is related to the target.

use std::collections::HashMap;

use crate::abstraction::ClassEquivalence;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::eval::{compile_core, core_extension_compiled, Point};
use crate::model::universe::Universe;
use crate::syntax::{enumeration_window, CoreFormula};

/// Default number of enumeration indices a search may scan.
pub const DEFAULT_BUDGET: u64 = 50_000;

/// Rows are computed this many indices at a time.
const CHUNK: usize = 256;

/// Most distinct extensions used for the transitivity check of a
/// user-supplied equivalence.
pub const TRANSITIVITY_CAP: usize = 64;

/// A subclass of a universe, as a bitset over element positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassExtension {
    universe: String,
    bits: BitSet,
}

impl ClassExtension {
    pub fn new(u: &Universe, bits: BitSet) -> ClassExtension {
        assert_eq!(bits.len(), u.len(), "bitset length must equal the universe size");
        ClassExtension { universe: u.name().to_string(), bits }
    }

    pub fn from_sets(u: &Universe, sets: &[HfSet]) -> Result<ClassExtension> {
        let mut bits = BitSet::new(u.len());
        for s in sets {
            let pos = u.position(s).ok_or_else(|| Error::ElementNotInUniverse(s.to_string()))?;
            bits.insert(pos);
        }
        Ok(ClassExtension::new(u, bits))
    }

    pub fn universe(&self) -> &str {
        &self.universe
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.bits.contains(pos)
    }

    pub fn members(&self, u: &Universe) -> Vec<HfSet> {
        self.bits.ones().map(|i| u.element(i).clone()).collect()
    }

    /// The class as a set (it is a subset of the universe, so always finite).
    pub fn to_hfset(&self, u: &Universe) -> HfSet {
        HfSet::from_members(self.members(u))
    }

    fn check_universe(&self, u: &Universe) -> Result<()> {
        if self.universe != u.name() || self.bits.len() != u.len() {
            return Err(Error::CrossUniverse { left: self.universe.clone(), right: u.name().to_string() });
        }
        Ok(())
    }
}

/// Outcome of [`first_equivalent_search`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchResult {
    pub index: u64,
    pub formula: CoreFormula,
    /// Every working parameter of minimal rank, ascending.
    pub params: Vec<HfSet>,
}

#[derive(Default)]
pub(crate) struct ScanTable {
    formulas: Vec<CoreFormula>,
    /// `rows[n][p]`: extension of ψₙ with P := element p.
    rows: Vec<Vec<BitSet>>,
    /// Index of the first row in which each extension occurs.
    firsts: HashMap<BitSet, usize>,
    cached: HashMap<(String, BitSet), SearchResult>,
}

impl ScanTable {
    fn ensure(&mut self, u: &Universe, upto: usize) {
        while self.rows.len() <= upto {
            let start = self.rows.len();
            let end = (start + CHUNK).max(upto + 1).min(upto + 1 + CHUNK);
            let params: Vec<Point> = (0..u.len()).map(|i| Point::Elem(i as u32)).collect();
            for (offset, f) in enumeration_window(start, end).into_iter().enumerate() {
                let c = compile_core(&f);
                let row: Vec<BitSet> = params.iter().map(|p| core_extension_compiled(u, &c, p)).collect();
                for b in &row {
                    self.firsts.entry(b.clone()).or_insert(start + offset);
                }
                self.formulas.push(f);
                self.rows.push(row);
            }
        }
    }
}

fn minimal_rank(u: &Universe, working: &[usize]) -> Vec<HfSet> {
    let min = working.iter().map(|p| u.element(*p).rank()).min().expect("nonempty");
    working.iter().map(|p| u.element(*p).clone()).filter(|s| s.rank() == min).collect()
}

/// Least `n ≤ budget` such that some parameter `p ∈ u` makes the extension of
/// ψₙ related to `target`, together with every such `p` of minimal rank.
///
/// User-supplied equivalences are checked along the way: reflexivity and
/// symmetry on every extension met, transitivity on the first
/// [`TRANSITIVITY_CAP`] distinct ones.
pub fn first_equivalent_search(
    u: &Universe,
    target: &ClassExtension,
    equiv: &ClassEquivalence,
    budget: u64,
) -> Result<SearchResult> {
    target.check_universe(u)?;
    let key = equiv.cache_key().map(|k| (k, target.bits.clone()));
    let mut table = u.scan.lock().map_err(|_| Error::Invariant("scan table poisoned".into()))?;
    if let Some(hit) = key.as_ref().and_then(|k| table.cached.get(k)) {
        return if hit.index <= budget { Ok(hit.clone()) } else { Err(Error::BudgetExceeded(budget + 1)) };
    }
    let limit = usize::try_from(budget).unwrap_or(usize::MAX - CHUNK - 1);
    let found = match equiv {
        ClassEquivalence::Extensional => {
            let mut n = None;
            loop {
                if let Some(&first) = table.firsts.get(&target.bits) {
                    n = Some(first);
                    break;
                }
                if table.rows.len() > limit {
                    break;
                }
                let next = table.rows.len();
                table.ensure(u, next);
            }
            n.filter(|n| *n <= limit).map(|n| {
                let working: Vec<usize> = (0..u.len()).filter(|p| table.rows[n][*p] == target.bits).collect();
                (n, working)
            })
        }
        _ => {
            let mut checker = Checker::new(u, equiv, target);
            let mut hit = None;
            for n in 0..=limit {
                table.ensure(u, n);
                let mut working = Vec::new();
                for p in 0..u.len() {
                    if checker.related_to_target(&table.rows[n][p])? {
                        working.push(p);
                    }
                }
                if !working.is_empty() {
                    hit = Some((n, working));
                    break;
                }
            }
            checker.check_transitivity()?;
            hit
        }
    };
    let (n, working) = found.ok_or(Error::BudgetExceeded(budget.saturating_add(1)))?;
    let result =
        SearchResult { index: n as u64, formula: table.formulas[n].clone(), params: minimal_rank(u, &working) };
    if let Some(k) = key {
        table.cached.insert(k, result.clone());
    }
    Ok(result)
}

/// Memoizes the relation against the target and validates equivalence laws.
struct Checker<'a> {
    u: &'a Universe,
    equiv: &'a ClassEquivalence,
    target: &'a BitSet,
    validate: bool,
    memo: HashMap<BitSet, bool>,
    distinct: Vec<BitSet>,
}

impl<'a> Checker<'a> {
    fn new(u: &'a Universe, equiv: &'a ClassEquivalence, target: &'a ClassExtension) -> Checker<'a> {
        let validate = equiv.needs_validation();
        let mut c = Checker { u, equiv, target: &target.bits, validate, memo: HashMap::new(), distinct: Vec::new() };
        c.distinct.push(target.bits.clone());
        c
    }

    fn related_to_target(&mut self, e: &BitSet) -> Result<bool> {
        if let Some(r) = self.memo.get(e) {
            return Ok(*r);
        }
        let forward = self.equiv.related(self.u, self.target, e)?;
        if self.validate {
            if !self.equiv.related(self.u, e, e)? {
                return Err(self.violation("reflexivity", &[e]));
            }
            if self.equiv.related(self.u, e, self.target)? != forward {
                return Err(self.violation("symmetry", &[self.target, e]));
            }
            if e != self.target && self.distinct.len() < TRANSITIVITY_CAP {
                self.distinct.push(e.clone());
            }
        }
        self.memo.insert(e.clone(), forward);
        Ok(forward)
    }

    fn check_transitivity(&self) -> Result<()> {
        if !self.validate {
            return Ok(());
        }
        let d = &self.distinct;
        let mut rel = vec![vec![false; d.len()]; d.len()];
        for i in 0..d.len() {
            for j in 0..d.len() {
                rel[i][j] = self.equiv.related(self.u, &d[i], &d[j])?;
            }
        }
        for a in 0..d.len() {
            for b in 0..d.len() {
                if !rel[a][b] {
                    continue;
                }
                for c in 0..d.len() {
                    if rel[b][c] && !rel[a][c] {
                        return Err(self.violation("transitivity", &[&d[a], &d[b], &d[c]]));
                    }
                }
            }
        }
        Ok(())
    }

    fn violation(&self, property: &str, classes: &[&BitSet]) -> Error {
        let witness = classes
            .iter()
            .map(|b| HfSet::from_members(b.ones().map(|i| self.u.element(i).clone())).to_string())
            .collect::<Vec<_>>()
            .join(", ");
        Error::NotEquivalence { property: property.to_string(), witness }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eval::core_extension;
    use crate::syntax::{enumerate_u64, normalize, parse};

    fn ext_of(u: &Universe, src: &str, p: &HfSet) -> ClassExtension {
        let f = normalize(&parse(src).unwrap(), "x", "p").unwrap();
        ClassExtension::new(u, core_extension(u, &f, &Point::of(u, p)))
    }

    /// Independent linear scan: recompute every extension from scratch.
    fn linear_scan(u: &Universe, target: &BitSet, related: impl Fn(&BitSet) -> bool) -> (u64, Vec<HfSet>) {
        for n in 0.. {
            let f = enumerate_u64(n);
            let working: Vec<&HfSet> =
                u.elements().iter().filter(|p| related(&core_extension(u, &f, &Point::of(u, p)))).collect();
            if let Some(min) = working.iter().map(|p| p.rank()).min() {
                let _ = target;
                return (n, working.into_iter().filter(|p| p.rank() == min).cloned().collect());
            }
        }
        unreachable!()
    }

    #[test]
    fn universal_class_matches_linear_scan() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let target = ext_of(&v3, "x = x", &HfSet::empty());
        let r = first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, DEFAULT_BUDGET).unwrap();
        let (n, params) = linear_scan(&v3, target.bits(), |b| b == target.bits());
        assert_eq!((r.index, r.params.clone()), (n, params));
        assert!(!r.params.is_empty());
        assert_eq!(r.formula, enumerate_u64(n));
    }

    #[test]
    fn empty_target_same_under_both_equivalences() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let target = ClassExtension::new(&v3, BitSet::new(4));
        let a = first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, DEFAULT_BUDGET).unwrap();
        let b = first_equivalent_search(&v3, &target, &ClassEquivalence::Equinumerous, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn larger_budget_gives_same_answer() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let target = ext_of(&v3, "ex y (y in x and ex z z in y)", &HfSet::empty());
        let a = first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, DEFAULT_BUDGET).unwrap();
        let b = first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, 4 * DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
        let (n, params) = linear_scan(&v3, target.bits(), |b| b == target.bits());
        assert_eq!((a.index, a.params), (n, params));
        assert_eq!(
            first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, a.index.saturating_sub(1)),
            if a.index == 0 { Ok(b) } else { Err(Error::BudgetExceeded(a.index)) }
        );
    }

    #[test]
    fn search_reaches_the_presenting_formula() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let src = "ex y (y in x and not y in p)";
        let f = normalize(&parse(src).unwrap(), "x", "p").unwrap();
        let idx = crate::syntax::index_of_u64(&f).unwrap().unwrap();
        for p in v3.elements() {
            let target = ext_of(&v3, src, p);
            let r = first_equivalent_search(&v3, &target, &ClassEquivalence::Extensional, idx).unwrap();
            assert!(r.index <= idx);
        }
    }

    #[test]
    fn foreign_targets_are_rejected() {
        let v2 = Universe::v_stage(2, false).unwrap();
        let v3 = Universe::v_stage(3, false).unwrap();
        let t = ClassExtension::new(&v2, BitSet::new(2));
        assert!(matches!(
            first_equivalent_search(&v3, &t, &ClassEquivalence::Extensional, 10),
            Err(Error::CrossUniverse { .. })
        ));
    }
}
