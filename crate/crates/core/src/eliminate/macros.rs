//! Pure ∈/= definitions used by the translators: literal definitions of
//! individual sets, rank bounds, and relativization.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::syntax::{Formula, Term};

/// Default AST node budget for a single literal definition.
pub const LITERAL_NODE_BUDGET: u64 = 1_000_000;

/// Hands out binder names that are distinct from each other and from a
/// reserved set. A name is never reused, so no generated binder can capture
/// a variable it was not meant to bind.
#[derive(Clone, Debug, Default)]
pub(crate) struct NameSupply {
    used: BTreeSet<String>,
    /// Next suffix to try for each base.
    next: HashMap<String, u64>,
}

impl NameSupply {
    pub(crate) fn new(reserved: BTreeSet<String>) -> NameSupply {
        NameSupply { used: reserved, next: HashMap::new() }
    }

    pub(crate) fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        if self.used.contains(&name) {
            let k = self.next.entry(base.to_string()).or_insert(1);
            loop {
                name = format!("{base}{k}");
                *k += 1;
                if !self.used.contains(&name) {
                    break;
                }
            }
        }
        self.used.insert(name.clone());
        name
    }
}

fn var(n: &str) -> Term {
    Term::var(n)
}

fn mem(a: Term, b: Term) -> Formula {
    Formula::mem(a, b)
}

/// `∃v (v ∈ g ∧ body)`, in the shape the evaluator iterates over `g` only.
pub(crate) fn exists_in(v: &str, g: Term, body: Formula) -> Formula {
    Formula::exists(v, Formula::and(mem(var(v), g), body))
}

/// `∀v (v ∈ g → body)`.
pub(crate) fn forall_in(v: &str, g: Term, body: Formula) -> Formula {
    Formula::forall(v, Formula::implies(mem(var(v), g), body))
}

/// Node count of the literal definition of `d`, saturating.
pub fn literal_size(d: &HfSet) -> u64 {
    fn go(d: &HfSet, memo: &mut HashMap<HfSet, u64>) -> u64 {
        if let Some(n) = memo.get(d) {
            return *n;
        }
        let n = if d.is_empty() {
            5
        } else {
            let k = d.cardinality() as u64;
            d.members().iter().fold(4 + 10 * k, |acc, m| acc.saturating_add(go(m, memo)))
        };
        memo.insert(d.clone(), n);
        n
    }
    go(d, &mut HashMap::new())
}

/// A pure formula in the free variable `v` that holds exactly of `d` in any
/// transitive universe containing `d`.
///
/// `∅` is described by `∀t ¬ t ∈ v`; a nonempty set by naming a witness for
/// each member inside `v` and saying that `v` has no other members.
pub fn literal_definition(d: &HfSet) -> Result<Formula> {
    literal_definition_within(d, "v", LITERAL_NODE_BUDGET)
}

/// [`literal_definition`] with a chosen free variable and node budget.
pub fn literal_definition_within(d: &HfSet, v: &str, budget: u64) -> Result<Formula> {
    let mut names = NameSupply::new(BTreeSet::from([v.to_string()]));
    define(d, &var(v), &mut names, budget)
}

pub(crate) fn define(d: &HfSet, subject: &Term, names: &mut NameSupply, budget: u64) -> Result<Formula> {
    let nodes = literal_size(d);
    if nodes > budget {
        return Err(Error::LiteralTooLarge { nodes, budget });
    }
    Ok(build(d, subject, names))
}

fn build(d: &HfSet, subject: &Term, names: &mut NameSupply) -> Formula {
    if d.is_empty() {
        let t = names.fresh("t");
        return Formula::forall(&t, Formula::not(mem(var(&t), subject.clone())));
    }
    let witnesses: Vec<String> = d.members().iter().map(|_| names.fresh("t")).collect();
    let s = names.fresh("s");
    let others = Formula::disj(witnesses.iter().map(|w| Formula::eq(var(&s), var(w)))).expect("nonempty");
    let mut out = forall_in(&s, subject.clone(), others);
    for (m, w) in d.members().iter().zip(&witnesses).rev() {
        let inner = build(m, &var(w), names);
        out = exists_in(w, subject.clone(), Formula::and(inner, out));
    }
    out
}

/// `rank(v) < k` for `k ≥ 1`, in the free variable `v`.
pub fn rank_below(k: u32, v: &str) -> Formula {
    let mut names = NameSupply::new(BTreeSet::from([v.to_string()]));
    rank_below_term(k, &var(v), &mut names)
}

pub(crate) fn rank_below_term(k: u32, a: &Term, names: &mut NameSupply) -> Formula {
    assert!(k >= 1, "rank bounds start at 1");
    let t = names.fresh("t");
    if k == 1 {
        Formula::forall(&t, Formula::not(mem(var(&t), a.clone())))
    } else {
        let inner = rank_below_term(k - 1, &var(&t), names);
        forall_in(&t, a.clone(), inner)
    }
}

/// `rank(a) < rank(b)` for sets of rank below `stage`.
pub fn rank_less(a: &str, b: &str, stage: u32) -> Formula {
    let mut names = NameSupply::new(BTreeSet::from([a.to_string(), b.to_string()]));
    rank_less_term(&var(a), &var(b), stage, &mut names)
}

pub(crate) fn rank_less_term(a: &Term, b: &Term, stage: u32, names: &mut NameSupply) -> Formula {
    // rank(a) < rank(b) iff some k ≤ rank(b) has rank(a) < k, and rank(b) < stage.
    let cases =
        (1..stage).map(|k| Formula::and(rank_below_term(k, a, names), Formula::not(rank_below_term(k, b, names))));
    let cases: Vec<Formula> = cases.collect();
    Formula::disj(cases).unwrap_or_else(|| Formula::not(Formula::eq(a.clone(), a.clone())))
}

/// Bounds every quantifier of a pure formula by membership in `z`.
pub fn relativize(f: &Formula, z: &str) -> Formula {
    match f {
        Formula::Mem(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(relativize(g, z)),
        Formula::And(a, b) => Formula::and(relativize(a, z), relativize(b, z)),
        Formula::Or(a, b) => Formula::or(relativize(a, z), relativize(b, z)),
        Formula::Implies(a, b) => Formula::implies(relativize(a, z), relativize(b, z)),
        Formula::Iff(a, b) => Formula::iff(relativize(a, z), relativize(b, z)),
        Formula::ForAll(v, g) => forall_in(v, var(z), relativize(g, z)),
        Formula::Exists(v, g) => exists_in(v, var(z), relativize(g, z)),
    }
}
