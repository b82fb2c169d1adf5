use super::*;
use crate::error::Error;
use crate::hfset::HfSet;
use crate::model::{eval, Env, Universe, DEFAULT_BUDGET};
use crate::syntax::{index_of, normalize, parse, Formula};

fn hf(n: u64) -> HfSet {
    HfSet::from_ackermann_index(n)
}

fn env(binds: &[(&str, &HfSet)]) -> Env {
    binds.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect()
}

/// Literal translation under `env` must agree with the extended semantics.
fn literal_agrees(u: &Universe, src: &str, env: &Env) -> bool {
    let f = parse(src).unwrap();
    let expected = eval_extended(u, &f, env, DEFAULT_BUDGET).unwrap();
    let t = translate_literal(u, &f, env, DEFAULT_BUDGET).unwrap();
    assert!(t.formula.is_pure(), "{}", t.formula);
    assert!(t.universe.is_transitive());
    assert_eq!(eval(&t.universe, &t.formula, env).unwrap(), expected, "{src} under {env:?}");
    expected
}

#[test]
fn identical_extensions_translate_to_truth() {
    let v3 = Universe::v_stage(3, false).unwrap();
    assert!(literal_agrees(&v3, "eps[x | x = x] = eps[x | not not x = x]", &Env::new()));
    assert!(!literal_agrees(&v3, "eps[x | x = x] = eps[x | x in $p]", &env(&[("p", &hf(0))])));
}

#[test]
fn pure_input_keeps_its_truth_value() {
    let v3 = Universe::v_stage(3, false).unwrap();
    for src in ["all x ex y x in y", "ex x all y not y in x", "all x (x in x -> x = x)", "$p in $q"] {
        for p in v3.elements() {
            let e = env(&[("p", p), ("q", &hf(3))]);
            let f = parse(src).unwrap();
            let t = translate_literal(&v3, &f, &e, DEFAULT_BUDGET).unwrap();
            assert_eq!(eval(&t.universe, &t.formula, &e).unwrap(), eval(&v3, &f, &e).unwrap(), "{src}");
        }
    }
    let t = translate_literal(&v3, &parse("$p in $q").unwrap(), &Env::new(), DEFAULT_BUDGET).unwrap();
    assert_eq!(t.formula.to_string(), "$p in $q");
    assert_eq!(t.guard.variable, None);
}

#[test]
fn parameters_and_literals() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let cases = [
        "eps[x | x in $p] = eps[x | x = $p]",
        "ex y (y in $p and eps[x | x in $p or x = #0] = eps[x | x in $p])",
        "#1 in $p or eps[x | x in #3] = eps[x | x in $p]",
        "all y (y in eps[x | x in $p] <-> y in $p)",
        "eps[x | x in $p] in eps[x | ex y (y in x and eps[w | w = w] = eps[w | w = w])]",
    ];
    for src in cases {
        for p in v3.elements() {
            literal_agrees(&v3, src, &env(&[("p", p)]));
        }
    }
}

#[test]
fn denotations_are_recorded() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let f = parse("eps[x | x = x] = eps[x | not not x = x]").unwrap();
    let t = translate_literal(&v3, &f, &Env::new(), DEFAULT_BUDGET).unwrap();
    assert_eq!(t.denotations.len(), 2);
    assert_eq!(t.denotations[0].value, t.denotations[1].value);
    for d in &t.denotations {
        assert!(t.universe.contains(&d.value));
    }
    assert_eq!(t.audit().denotations.len(), 2);
}

#[test]
fn literal_mode_rejects_bound_dependence() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let f = parse("all t eps[x | x in t] = eps[x | x in t]").unwrap();
    assert!(matches!(
        translate_literal(&v3, &f, &Env::new(), DEFAULT_BUDGET),
        Err(Error::EpsDependsOnBoundVariable(_))
    ));
}

#[test]
fn translation_needs_a_stage() {
    let u = Universe::ackermann_segment(5).unwrap();
    let f = parse("ex x x = x").unwrap();
    assert!(matches!(translate_literal(&u, &f, &Env::new(), DEFAULT_BUDGET), Err(Error::NotVStage(_))));
    assert!(matches!(translate_uniform(&u, &f, DEFAULT_BUDGET), Err(Error::NotVStage(_))));
}

/// Uniform translation must agree with the extended semantics for every
/// parameter value in `u` and every `y` in the enlarged universe.
fn uniform_grid(u: &Universe, src: &str) {
    let f = parse(src).unwrap();
    let t = translate_uniform(u, &f, DEFAULT_BUDGET).unwrap();
    assert!(t.formula.is_pure());
    let mut hits = 0;
    for p in u.elements() {
        for y in t.universe.elements() {
            let e = env(&[("p", p), ("y", y)]);
            let expected = eval_extended(u, &f, &e, DEFAULT_BUDGET).unwrap();
            assert_eq!(eval(&t.universe, &t.formula, &e).unwrap(), expected, "{src} at p = {p}, y = {y}");
            hits += expected as usize;
        }
    }
    assert!(hits > 0, "{src} never holds");
}

#[test]
fn uniform_equations() {
    let v3 = Universe::v_stage(3, false).unwrap();
    for body in ["x in x", "x in $p", "x = $p", "$p in x"] {
        let n = index_of(&normalize(&parse(body).unwrap(), "x", "p").unwrap()).unwrap();
        assert!(n <= MAX_UNIFORM_INDEX.into(), "{body} has index {n}");
        uniform_grid(&v3, &format!("y = eps[x | {body}]"));
    }
}

#[test]
fn uniform_handles_bound_parameters() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let f = parse("all t all s (eps[x | x in t] = eps[x | x in s] -> t = s)").unwrap();
    let t = translate_uniform(&v3, &f, DEFAULT_BUDGET).unwrap();
    assert!(eval_extended(&v3, &f, &Env::new(), DEFAULT_BUDGET).unwrap());
    assert!(eval(&t.universe, &t.formula, &Env::new()).unwrap());
}

#[test]
fn uniform_limits() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let big = parse("y = eps[x | ex w (w in x and w in $p)]").unwrap();
    assert!(matches!(translate_uniform(&v3, &big, DEFAULT_BUDGET), Err(Error::IndexTooLarge { .. })));
    let two = parse("y = eps[x | x in $p or x in $q]").unwrap();
    assert!(matches!(translate_uniform(&v3, &two, DEFAULT_BUDGET), Err(Error::Unsupported(_))));
    let nested = parse("y = eps[x | x in eps[w | w = w]]").unwrap();
    assert!(matches!(translate_uniform(&v3, &nested, DEFAULT_BUDGET), Err(Error::NotPure(_))));
}

#[test]
fn outputs_reparse() {
    let v3 = Universe::v_stage(3, false).unwrap();
    let f = parse("y = eps[x | x in $p]").unwrap();
    let t = translate_uniform(&v3, &f, DEFAULT_BUDGET).unwrap();
    let again: Formula = parse(&t.formula.to_string()).unwrap();
    assert_eq!(again, t.formula);
}
