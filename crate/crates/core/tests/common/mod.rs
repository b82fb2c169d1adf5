#![allow(dead_code)]

use proptest::prelude::*;

use hf_frege::syntax::{Formula, Term};
use hf_frege::HfSet;

/// Wraps every free name outside `keep` in an existential quantifier.
pub fn close_except(f: Formula, keep: &[&str]) -> Formula {
    f.free_names().into_iter().filter(|n| !keep.contains(&n.as_str())).fold(f, |acc, n| Formula::exists(&n, acc))
}

fn connect(a: Formula, b: Formula, k: u8) -> Formula {
    match k {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        _ => Formula::iff(a, b),
    }
}

/// Formulas over the given atomic terms, quantifying over `binders`.
pub fn formula_over(terms: BoxedStrategy<Term>, binders: &'static [&'static str]) -> BoxedStrategy<Formula> {
    let leaf = (terms.clone(), terms, any::<bool>())
        .prop_map(|(a, b, mem)| if mem { Formula::mem(a, b) } else { Formula::eq(a, b) });
    leaf.prop_recursive(4, 20, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone(), 0u8..4).prop_map(|(a, b, k)| connect(a, b, k)),
            (prop::sample::select(binders), inner, any::<bool>()).prop_map(|(v, body, all)| {
                if all {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }),
        ]
    })
    .boxed()
}

fn names(vars: &'static [&'static str], params: &'static [&'static str]) -> BoxedStrategy<Term> {
    let vs = prop::sample::select(vars).prop_map(Term::var);
    if params.is_empty() {
        vs.boxed()
    } else {
        prop_oneof![3 => vs, 1 => prop::sample::select(params).prop_map(Term::param)].boxed()
    }
}

/// Pure formulas whose free names are among `x`, `y`, `z` and `$p`.
pub fn pure_formula() -> BoxedStrategy<Formula> {
    formula_over(names(&["x", "y", "z"], &["p"]), &["x", "y", "z"])
}

/// Pure formulas in the object variable `x` and parameter `$p` only.
pub fn presentation_formula() -> BoxedStrategy<Formula> {
    pure_formula().prop_map(|f| close_except(f, &["x", "p"])).boxed()
}

pub fn small_literal() -> impl Strategy<Value = HfSet> {
    prop_oneof![4 => (0u64..16).prop_map(HfSet::from_ackermann_index), 1 => (0u64..1 << 20).prop_map(HfSet::from_ackermann_index)]
}

/// ε-terms whose bodies depend only on `$p`.
pub fn eps_term() -> BoxedStrategy<Term> {
    let body_terms = prop_oneof![
        3 => names(&["w", "y"], &["p"]),
        1 => (0u64..16).prop_map(|n| Term::Lit(HfSet::from_ackermann_index(n))),
    ]
    .boxed();
    formula_over(body_terms, &["y"]).prop_map(|body| Term::eps("w", close_except(body, &["w", "p"]))).boxed()
}

/// Closed formulas over `$p` with literals and ε-terms, for the translators.
pub fn extended_formula() -> BoxedStrategy<Formula> {
    let terms = prop_oneof![
        4 => names(&["y", "z"], &["p"]),
        1 => small_literal().prop_map(Term::Lit),
        2 => eps_term(),
    ]
    .boxed();
    formula_over(terms, &["y", "z"]).prop_map(|f| close_except(f, &["p"])).boxed()
}

/// Anything the printer can print, for round trips.
pub fn any_formula() -> BoxedStrategy<Formula> {
    let terms = prop_oneof![
        4 => names(&["x", "y", "z", "w"], &["p", "x"]),
        1 => small_literal().prop_map(Term::Lit),
        1 => eps_term(),
    ]
    .boxed();
    formula_over(terms, &["x", "y", "z", "w"])
}
