//! The acceptance battery. Each criterion checks the library against an
//! oracle from [`crate::oracle`] or against an exact expected value, and
//! reports one line.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hf_frege::abstraction::{
    blv_check, class_number, extension_of, scott_cardinal, Presentation, ScottAbstraction, SetRelation,
};
use hf_frege::diagonal::{russell_escape, russell_witness};
use hf_frege::eliminate::{eval_extended, translate_literal, translate_uniform};
use hf_frege::model::{eval, Env, Universe, DEFAULT_BUDGET};
use hf_frege::syntax::{
    code_formula, decode_formula, enumerate_u64, index_of_u64, normalize, parse, Formula, FormulaStream,
};
use hf_frege::{HfSet, Result};

use crate::corpus::FormulaGen;
use crate::oracle::{self, Domain};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_241_018;

/// Number of criteria.
pub const CRITERIA: u8 = 9;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    /// Checks passed and the run finished within `limit`.
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {}: {} ({:.2} s, limit {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

/// Outcome of a criterion body: whether its checks held, and a summary.
type Outcome = Result<(bool, String)>;

/// Runs one criterion; ids run from 1 to [`CRITERIA`].
pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    let (title, limit, body): (&'static str, u64, fn(u64) -> Outcome) = match id {
        1 => ("Basic Law V over V_3", 60, basic_law_v),
        2 => ("least formula and minimal parameters match brute force", 60, minimality_oracle),
        3 => ("Scott cardinals over V_4", 5, scott_cardinals),
        4 => ("set-level abstraction over V_4", 30, set_abstraction),
        5 => ("Cantor-Hume for the subclasses of V_3", 120, cantor_hume),
        6 => ("elimination of ε-terms", 120, elimination),
        7 => ("diagonal witnesses", 60, diagonal_witnesses),
        8 => ("Russell escape", 120, russell_escapes),
        9 => ("infrastructure round trips", 60, round_trips),
        _ => panic!("no criterion {id}"),
    };
    let start = Instant::now();
    let outcome = body(seed);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit);
    let (ok, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let detail = if ok && elapsed > limit { format!("{detail}; over the time limit") } else { detail };
    CriterionReport { id, title, passed: ok && elapsed <= limit, detail, elapsed, limit }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run_criterion(id, seed)).collect()
}

fn v(r: u32) -> Universe {
    Universe::v_stage(r, false).expect("small stages always build")
}

fn bind(pairs: &[(&str, &HfSet)]) -> Env {
    pairs.iter().map(|(k, v)| (k.to_string(), (*v).clone())).collect()
}

fn naive_extension(d: &Domain, f: &Formula, var: &str, env: &Env) -> Vec<bool> {
    let base: Vec<(String, HfSet)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    d.elements()
        .iter()
        .map(|x| {
            let mut scope = base.clone();
            scope.push((var.to_string(), x.clone()));
            oracle::eval(d, f, &mut scope)
        })
        .collect()
}

fn naive_truth(d: &Domain, f: &Formula, env: &Env) -> bool {
    let mut scope: Vec<(String, HfSet)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    oracle::eval(d, f, &mut scope)
}

/// The first 30 enumerated formulas, each with every parameter from V_3.
fn corpus_presentations(v3: &Universe) -> Vec<Presentation> {
    let mut out = Vec::new();
    for n in 0..30 {
        let f = enumerate_u64(n).to_surface("x", "p");
        for p in v3.elements() {
            out.push(Presentation::new(f.clone(), bind(&[("p", p)])));
        }
    }
    out
}

fn basic_law_v(_seed: u64) -> Outcome {
    let v3 = v(3);
    let d = Domain::new(v3.elements());
    let pres = corpus_presentations(&v3);
    let report = blv_check(&v3, &pres, DEFAULT_BUDGET)?;
    let naive: Vec<Vec<bool>> = pres.iter().map(|p| naive_extension(&d, &p.formula, "x", &p.env)).collect();
    let mut library_matches = true;
    for (p, n) in pres.iter().zip(&naive) {
        let bits = p.extension(&v3)?;
        library_matches &= (0..v3.len()).all(|i| bits.contains(i) == n[i]);
    }
    let mut naive_equal = 0;
    for i in 0..naive.len() {
        for j in i + 1..naive.len() {
            naive_equal += (naive[i] == naive[j]) as usize;
        }
    }
    let ok = report.pairs == 7140
        && report.violations.is_empty()
        && library_matches
        && naive_equal == report.equal_extensions;
    Ok((
        ok,
        format!(
            "{} presentations, {} pairs, {} with equal extensions (oracle {naive_equal}), {} distinct objects, {} violations",
            report.presentations,
            report.pairs,
            report.equal_extensions,
            report.distinct_objects,
            report.violations.len()
        ),
    ))
}

fn minimality_oracle(seed: u64) -> Outcome {
    let v3 = v(3);
    let d = Domain::new(v3.elements());
    let pres = corpus_presentations(&v3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, pres.len(), 25).into_vec();
    let mut mismatches = Vec::new();
    for &i in &picks {
        let p = &pres[i];
        let obj = extension_of(&v3, p, DEFAULT_BUDGET)?;
        let target = naive_extension(&d, &p.formula, "x", &p.env);
        let brute = oracle::first_defining_formula(&d, &target, DEFAULT_BUDGET);
        let same =
            brute.as_ref().is_some_and(|b| b.index == obj.index && b.formula == obj.formula && b.params == obj.params);
        if !same {
            mismatches.push(i);
        }
    }
    Ok((mismatches.is_empty(), format!("{} presentations compared, mismatches at {:?}", picks.len(), mismatches)))
}

fn scott_cardinals(_seed: u64) -> Outcome {
    let v4 = v(4);
    let cards = v4.elements().iter().map(scott_cardinal).collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    for (x, cx) in v4.elements().iter().zip(&cards) {
        for (y, cy) in v4.elements().iter().zip(&cards) {
            bad += ((cx == cy) != (x.cardinality() == y.cardinality())) as usize;
        }
    }
    let two = HfSet::singleton(HfSet::from_members([HfSet::empty(), HfSet::singleton(HfSet::empty())]));
    let pairs: Vec<&HfSet> = v4.elements().iter().filter(|x| x.cardinality() == 2).collect();
    let two_ok = pairs.iter().all(|x| scott_cardinal(x).is_ok_and(|c| c == two));
    Ok((
        bad == 0 && two_ok,
        format!("256 pairs, {bad} disagreements; {} two-element sets all map to {two}: {two_ok}", pairs.len()),
    ))
}

fn set_abstraction(_seed: u64) -> Outcome {
    let v4 = v(4);
    let d = Domain::new(v4.elements());
    let relations = ["a = b", "(ex t (t in a and all s not s in t)) <-> (ex t (t in b and all s not s in t))", "a = a"];
    let mut details = Vec::new();
    let mut ok = true;
    for src in relations {
        let rel = parse(src)?;
        let scott = ScottAbstraction::new(&v4, &SetRelation::formula(src)?)?;
        let objects = v4.elements().iter().map(|x| scott.abstract_of(x)).collect::<Result<Vec<_>>>()?;
        let mut bad = 0;
        for (i, x) in v4.elements().iter().enumerate() {
            for (j, y) in v4.elements().iter().enumerate() {
                let related = naive_truth(&d, &rel, &bind(&[("a", x), ("b", y)]));
                bad += ((objects[i] == objects[j]) != related) as usize;
            }
        }
        ok &= bad == 0;
        details.push(format!("{} classes/{bad} bad", scott.class_count()));
    }
    Ok((ok, format!("equality, rank-0 member count, total: {}", details.join(", "))))
}

fn cantor_hume(_seed: u64) -> Outcome {
    let v3 = v(3);
    let d = Domain::new(v3.elements());
    let mut numbers = Vec::new();
    let mut realized = 0;
    for mask in 0u32..16 {
        let members: Vec<HfSet> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| v3.element(i).clone()).collect();
        let p = HfSet::from_members(members);
        let pres = Presentation::parse("x in $p", bind(&[("p", &p)]))?;
        let naive = naive_extension(&d, &pres.formula, "x", &pres.env);
        let bits = pres.extension(&v3)?;
        let exact = (0..4).all(|i| naive[i] == (mask >> i & 1 == 1) && bits.contains(i) == naive[i]);
        realized += exact as usize;
        numbers.push((mask.count_ones(), class_number(&v3, &pres, DEFAULT_BUDGET)?));
    }
    let mut bad = 0;
    for (ci, a) in &numbers {
        for (cj, b) in &numbers {
            bad += (a.same_as(b)? != (ci == cj)) as usize;
        }
    }
    Ok((realized == 16 && bad == 0, format!("{realized}/16 subclasses realized, 256 pairs, {bad} disagreements")))
}

fn elimination(seed: u64) -> Outcome {
    let v3 = v(3);
    let mut gen = FormulaGen::new(seed);
    let corpus: Vec<Formula> = (0..50).map(|_| gen.extended()).collect();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (k, f) in corpus.iter().enumerate() {
        for p in v3.elements() {
            for q in v3.elements() {
                let env = bind(&[("p", p), ("q", q)]);
                let expected = eval_extended(&v3, f, &env, DEFAULT_BUDGET)?;
                let t = translate_literal(&v3, f, &env, DEFAULT_BUDGET)?;
                let d = Domain::new(t.universe.elements());
                let ok = t.formula.is_pure()
                    && eval(&t.universe, &t.formula, &env)? == expected
                    && naive_truth(&d, &t.formula, &env) == expected;
                checks += 1;
                if !ok {
                    failures.push(format!("#{k} at p={p}, q={q}"));
                }
            }
        }
    }
    let bodies = ["x in x", "x in $p", "$p in x", "x = $p", "not x in x"];
    let mut grid = 0;
    for body in bodies {
        let index = index_of_u64(&normalize(&parse(body)?, "x", "p")?)?;
        if index.is_none_or(|n| n > 8) {
            failures.push(format!("body `{body}` has index {index:?}"));
            continue;
        }
        let f = parse(&format!("y = eps[x | {body}]"))?;
        let t = translate_uniform(&v3, &f, DEFAULT_BUDGET)?;
        for p in v3.elements() {
            for y in t.universe.elements() {
                let env = bind(&[("p", p), ("y", y)]);
                grid += 1;
                if eval(&t.universe, &t.formula, &env)? != eval_extended(&v3, &f, &env, DEFAULT_BUDGET)? {
                    failures.push(format!("uniform `{body}` at p={p}, y={y}"));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "literal: {checks} assignments over 50 formulas; uniform: {grid} grid points over 5 bodies; {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
    ))
}

fn diagonal_witnesses(seed: u64) -> Outcome {
    let mut gen = FormulaGen::new(seed ^ 0x7a5c);
    let mut bad = Vec::new();
    let mut largest = 0;
    for k in 0..100 {
        let t = gen.predicate();
        let w = russell_witness(&t, None)?;
        let d = Domain::new(w.universe.elements());
        let at_code = bind(&[("y", &w.code), ("x", &w.code)]);
        let oracle_t = naive_truth(&d, &w.predicate, &at_code);
        let oracle_r = naive_truth(&d, &w.diagonal, &bind(&[("x", &w.code)]));
        largest = largest.max(w.universe.len());
        if w.value_predicate == w.value_diagonal || oracle_t != w.value_predicate || oracle_r != w.value_diagonal {
            bad.push(k);
        }
    }
    Ok((bad.is_empty(), format!("100 predicates, failures {bad:?}, largest universe {largest}")))
}

fn russell_escapes(_seed: u64) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for desc in ["v2", "v3", "ack:4", "ack:8", "ack:16", "closure:#5,#11"] {
        let u = Universe::from_descriptor(desc)?;
        let e = russell_escape(&u, DEFAULT_BUDGET)?;
        let inside = u.elements().iter().any(|x| x == e.object.as_hfset());
        ok &= !inside;
        parts.push(format!("{desc}: psi_{} rank {}", e.object.index, e.absence.rank));
    }
    Ok((ok, format!("object outside every universe: {}", parts.join(", "))))
}

fn round_trips(seed: u64) -> Outcome {
    let mut failures = Vec::new();
    let ack_bad = (0..1u64 << 16)
        .filter(|&n| {
            let x = HfSet::from_ackermann_index(n);
            oracle::ackermann_index(&x) != n || x.small_index() != Some(n)
        })
        .count();
    if ack_bad > 0 {
        failures.push(format!("{ack_bad} Ackermann indices"));
    }
    let mut gen = FormulaGen::new(seed ^ 0x51);
    let print_bad = (0..1000)
        .filter(|_| {
            let f = gen.any();
            parse(&f.to_string()).map_or(true, |g| g != f)
        })
        .count();
    if print_bad > 0 {
        failures.push(format!("{print_bad} parse/print"));
    }
    let code_bad = (0..500)
        .filter(|&n| {
            let f = enumerate_u64(n);
            decode_formula(&code_formula(&f)).map_or(true, |g| g != f)
        })
        .count();
    if code_bad > 0 {
        failures.push(format!("{code_bad} code/decode"));
    }
    let enum_bad = FormulaStream::new()
        .take(10_000)
        .enumerate()
        .filter(|(i, f)| enumerate_u64(*i as u64) != *f || index_of_u64(f).ok().flatten() != Some(*i as u64))
        .count();
    if enum_bad > 0 {
        failures.push(format!("{enum_bad} enumerate/index_of"));
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "65536 Ackermann indices, 1000 parse/print, 500 code/decode, 10000 enumerate/index_of: all exact".into()
        } else {
            format!("mismatches: {}", failures.join(", "))
        },
    ))
}
