//! Truth for formulas with ε-terms and HF literals.
//!
//! An ε-term denotes the extension object of its body's class over the
//! universe, computed afresh for every assignment to the outer variables it
//! mentions. Quantifiers range over the universe; atoms compare sets in the
//! ambient HF world, so denotations outside the universe are fine.

use std::collections::{BTreeSet, HashMap};

use crate::abstraction::{abstraction_of_class, AbstractionObject, ClassEquivalence};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{ClassExtension, Env, Universe};
use crate::syntax::{EpsTerm, Formula, Term};

/// Truth of an extended formula. Inner searches stop after `budget` indices.
pub fn eval_extended(u: &Universe, f: &Formula, env: &Env, budget: u64) -> Result<bool> {
    Semantics::new(u, budget).formula(f, env, &mut Vec::new())
}

/// The object an ε-term denotes under `env`.
pub fn denote_eps(u: &Universe, e: &EpsTerm, env: &Env, budget: u64) -> Result<AbstractionObject> {
    Semantics::new(u, budget).denote(e, env, &mut Vec::new())
}

type Key = (*const EpsTerm, Vec<Option<HfSet>>);

/// Evaluation state; ε denotations are memoized per term and per values of
/// its free names, so the formulas evaluated must outlive the memo.
pub(crate) struct Semantics<'u> {
    u: &'u Universe,
    budget: u64,
    free: HashMap<*const EpsTerm, Vec<String>>,
    memo: HashMap<Key, AbstractionObject>,
}

impl<'u> Semantics<'u> {
    pub(crate) fn new(u: &'u Universe, budget: u64) -> Semantics<'u> {
        Semantics { u, budget, free: HashMap::new(), memo: HashMap::new() }
    }

    pub(crate) fn formula(&mut self, f: &Formula, env: &Env, bound: &mut Vec<(String, HfSet)>) -> Result<bool> {
        Ok(match f {
            Formula::Mem(a, b) => {
                let (a, b) = (self.term(a, env, bound)?, self.term(b, env, bound)?);
                b.contains(&a)
            }
            Formula::Eq(a, b) => self.term(a, env, bound)? == self.term(b, env, bound)?,
            Formula::Not(g) => !self.formula(g, env, bound)?,
            Formula::And(a, b) => self.formula(a, env, bound)? && self.formula(b, env, bound)?,
            Formula::Or(a, b) => self.formula(a, env, bound)? || self.formula(b, env, bound)?,
            Formula::Implies(a, b) => !self.formula(a, env, bound)? || self.formula(b, env, bound)?,
            Formula::Iff(a, b) => self.formula(a, env, bound)? == self.formula(b, env, bound)?,
            Formula::ForAll(v, g) => {
                for x in self.u.elements() {
                    bound.push((v.clone(), x.clone()));
                    let r = self.formula(g, env, bound);
                    bound.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists(v, g) => {
                for x in self.u.elements() {
                    bound.push((v.clone(), x.clone()));
                    let r = self.formula(g, env, bound);
                    bound.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn term(&mut self, t: &Term, env: &Env, bound: &mut Vec<(String, HfSet)>) -> Result<HfSet> {
        match t {
            Term::Var(v) => lookup(v, env, bound).ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::Param(v) => env.get(v).cloned().ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::Lit(s) => Ok(s.clone()),
            Term::Eps(e) => Ok(self.denote(e, env, bound)?.as_hfset().clone()),
        }
    }

    pub(crate) fn denote(
        &mut self,
        e: &EpsTerm,
        env: &Env,
        bound: &mut Vec<(String, HfSet)>,
    ) -> Result<AbstractionObject> {
        let ptr = e as *const EpsTerm;
        let names = self.free.entry(ptr).or_insert_with(|| {
            let mut names: BTreeSet<String> = e.body.free_names();
            names.remove(&e.var);
            names.into_iter().collect()
        });
        // A name may occur both as `v` and as `$v`, so key on both readings.
        let values: Vec<Option<HfSet>> =
            names.iter().flat_map(|n| [lookup(n, env, bound), env.get(n).cloned()]).collect();
        let key = (ptr, values);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut bits = BitSet::new(self.u.len());
        for (i, x) in self.u.elements().iter().enumerate() {
            bound.push((e.var.clone(), x.clone()));
            let r = self.formula(&e.body, env, bound);
            bound.pop();
            if r? {
                bits.insert(i);
            }
        }
        let class = ClassExtension::new(self.u, bits);
        let obj = abstraction_of_class(self.u, &class, &ClassEquivalence::Extensional, self.budget)?;
        self.memo.insert(key, obj.clone());
        Ok(obj)
    }
}

fn lookup(name: &str, env: &Env, bound: &[(String, HfSet)]) -> Option<HfSet> {
    bound.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v.clone()).or_else(|| env.get(name).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{extension_of, Presentation};
    use crate::model::DEFAULT_BUDGET;
    use crate::syntax::parse;

    fn check(src: &str, env: &[(&str, u64)]) -> bool {
        let v3 = Universe::v_stage(3, false).unwrap();
        let env: Env = env.iter().map(|(k, v)| (k.to_string(), HfSet::from_ackermann_index(*v))).collect();
        eval_extended(&v3, &parse(src).unwrap(), &env, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn identity_of_extensions() {
        assert!(check("eps[x | x = x] = eps[x | not not x = x]", &[]));
        assert!(!check("eps[x | x = x] = eps[x | x in $p]", &[("p", 0)]));
        assert!(check("ex y (y in eps[x | x = x] or y = y)", &[]));
    }

    #[test]
    fn denotation_is_the_extension_object() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let env = Env::from([("p".to_string(), HfSet::from_ackermann_index(3))]);
        let f = parse("y = eps[x | x in $p]").unwrap();
        let Formula::Eq(_, Term::Eps(e)) = &f else { unreachable!() };
        let obj = denote_eps(&v3, e, &env, DEFAULT_BUDGET).unwrap();
        let direct = extension_of(&v3, &Presentation::parse("x in $p", env.clone()).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(obj.same_as(&direct).unwrap());
        let mut env2 = env.clone();
        env2.insert("y".into(), direct.as_hfset().clone());
        assert!(eval_extended(&v3, &f, &env2, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn eps_terms_see_outer_variables() {
        // For each t, eps[x | x in t] is the object of t's own member class,
        // and these differ for different t in V_3 (all have distinct member sets).
        assert!(check("all t all s (eps[x | x in t] = eps[x | x in s] -> t = s)", &[]));
        // Denotations lie outside V_3, so no element equals one.
        assert!(!check("ex t t = eps[x | x = x]", &[]));
    }

    #[test]
    fn nested_eps_terms() {
        // The inner term denotes an object outside V_3, which therefore has no member in it.
        assert!(check("eps[y | y in eps[x | x = x]] = eps[y | not y = y]", &[]));
    }

    #[test]
    fn unbound_names_are_errors() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let err = eval_extended(&v3, &parse("eps[x | x in q] = eps[x | x = x]").unwrap(), &Env::new(), DEFAULT_BUDGET);
        assert_eq!(err.unwrap_err(), Error::UnboundVariable("q".into()));
    }
}
