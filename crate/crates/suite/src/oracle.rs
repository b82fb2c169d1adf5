//! Reference implementations written without the library's evaluator,
//! search tables or caches. They are slow and only meant for small cases.

use std::collections::HashSet;

use hf_frege::syntax::{CoreFormula, CoreTerm, Formula, FormulaStream, Term};
use hf_frege::HfSet;

/// A domain of quantification: a list of sets plus a membership index.
pub struct Domain {
    elements: Vec<HfSet>,
    lookup: HashSet<HfSet>,
}

impl Domain {
    pub fn new(elements: &[HfSet]) -> Domain {
        Domain { elements: elements.to_vec(), lookup: elements.iter().cloned().collect() }
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.elements
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.lookup.contains(x)
    }
}

/// `Σ_{y∈x} 2^{a(y)}`, straight from the definition.
pub fn ackermann_index(x: &HfSet) -> u64 {
    x.members().iter().map(|m| 1u64 << ackermann_index(m)).sum()
}

/// Tarski truth of a pure or literal-bearing formula. `env` is searched
/// innermost first, so quantified names shadow earlier ones.
///
/// Quantifiers of the form `∃v (v ∈ g ∧ φ)` and `∀v (v ∈ g → φ)` look only
/// at the members of `g` that lie in the domain; everything else ranges
/// over the whole domain.
pub fn eval(d: &Domain, f: &Formula, env: &mut Vec<(String, HfSet)>) -> bool {
    match f {
        Formula::Mem(a, b) => value(b, env).contains(&value(a, env)),
        Formula::Eq(a, b) => value(a, env) == value(b, env),
        Formula::Not(g) => !eval(d, g, env),
        Formula::And(a, b) => eval(d, a, env) && eval(d, b, env),
        Formula::Or(a, b) => eval(d, a, env) || eval(d, b, env),
        Formula::Implies(a, b) => !eval(d, a, env) || eval(d, b, env),
        Formula::Iff(a, b) => eval(d, a, env) == eval(d, b, env),
        Formula::Exists(v, g) => {
            let (range, body) = range_of(d, v, g, true, env);
            range.into_iter().any(|x| with(env, v, x, |env| eval(d, body, env)))
        }
        Formula::ForAll(v, g) => {
            let (range, body) = range_of(d, v, g, false, env);
            range.into_iter().all(|x| with(env, v, x, |env| eval(d, body, env)))
        }
    }
}

fn range_of<'f>(
    d: &Domain,
    v: &str,
    body: &'f Formula,
    existential: bool,
    env: &[(String, HfSet)],
) -> (Vec<HfSet>, &'f Formula) {
    let guarded = match body {
        Formula::And(first, rest) if existential => Some((first, rest)),
        Formula::Implies(first, rest) if !existential => Some((first, rest)),
        _ => None,
    };
    if let Some((first, rest)) = guarded {
        if let Formula::Mem(Term::Var(a), g) = &**first {
            let self_guard = matches!(g, Term::Var(b) if b == v);
            if a == v && !self_guard {
                let members = value(g, env).members().iter().filter(|m| d.contains(m)).cloned().collect();
                // The guard atom itself holds for every member visited.
                return (members, rest);
            }
        }
    }
    (d.elements().to_vec(), body)
}

fn with<R>(env: &mut Vec<(String, HfSet)>, v: &str, x: HfSet, f: impl FnOnce(&mut Vec<(String, HfSet)>) -> R) -> R {
    env.push((v.to_string(), x));
    let r = f(env);
    env.pop();
    r
}

fn value(t: &Term, env: &[(String, HfSet)]) -> HfSet {
    match t {
        Term::Var(v) | Term::Param(v) => env
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(|| panic!("oracle: unbound `{v}`")),
        Term::Lit(s) => s.clone(),
        Term::Eps(_) => panic!("oracle: ε-terms are not supported"),
    }
}

/// Truth of a core formula at X := `x`, P := `p`.
pub fn eval_core(d: &Domain, f: &CoreFormula, x: &HfSet, p: &HfSet) -> bool {
    fn go(d: &Domain, f: &CoreFormula, x: &HfSet, p: &HfSet, stack: &mut Vec<HfSet>) -> bool {
        let val = |t: &CoreTerm, stack: &Vec<HfSet>| match t {
            CoreTerm::X => x.clone(),
            CoreTerm::P => p.clone(),
            CoreTerm::Var(i) => stack[stack.len() - 1 - *i as usize].clone(),
        };
        match f {
            CoreFormula::Mem(a, b) => val(b, stack).contains(&val(a, stack)),
            CoreFormula::Eq(a, b) => val(a, stack) == val(b, stack),
            CoreFormula::Not(g) => !go(d, g, x, p, stack),
            CoreFormula::And(a, b) => go(d, a, x, p, stack) && go(d, b, x, p, stack),
            CoreFormula::Exists(g) => d.elements().iter().any(|e| {
                stack.push(e.clone());
                let r = go(d, g, x, p, stack);
                stack.pop();
                r
            }),
        }
    }
    go(d, f, x, p, &mut Vec::new())
}

/// Membership pattern of `{x : ψ(x, p)}` over the domain, in element order.
pub fn core_extension(d: &Domain, f: &CoreFormula, p: &HfSet) -> Vec<bool> {
    d.elements().iter().map(|x| eval_core(d, f, x, p)).collect()
}

/// Result of [`first_defining_formula`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstDefinition {
    pub index: u64,
    pub formula: CoreFormula,
    /// Parameters of minimal rank among those that work, ascending.
    pub params: Vec<HfSet>,
}

/// Walks the enumeration one formula at a time and tries every parameter,
/// stopping at the first formula whose extension equals `target`.
pub fn first_defining_formula(d: &Domain, target: &[bool], budget: u64) -> Option<FirstDefinition> {
    for (index, formula) in FormulaStream::new().enumerate().take(budget as usize + 1) {
        let working: Vec<HfSet> =
            d.elements().iter().filter(|p| core_extension(d, &formula, p) == target).cloned().collect();
        if let Some(min) = working.iter().map(HfSet::rank).min() {
            let mut params: Vec<HfSet> = working.into_iter().filter(|p| p.rank() == min).collect();
            params.sort();
            return Some(FirstDefinition { index: index as u64, formula, params });
        }
    }
    None
}
