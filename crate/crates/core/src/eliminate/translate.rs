//! Translation of extended formulas into the pure language of ∈ and =.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::eliminate::macros::{define, exists_in, forall_in, rank_less_term, relativize, NameSupply};
use crate::eliminate::semantics::Semantics;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{Env, Universe};
use crate::syntax::{code_formula, enumerate_u64, index_of, normalize, CoreFormula, EpsTerm, Formula, Term};

pub use crate::eliminate::macros::LITERAL_NODE_BUDGET;

/// Largest enumeration index of an ε-body that uniform mode accepts.
pub const MAX_UNIFORM_INDEX: u64 = 32;

/// How the quantifiers of the input were bounded in the output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageGuard {
    /// The input universe is V_stage.
    pub stage: u32,
    /// Variable bound to V_stage at the top of the output, when one was needed.
    pub variable: Option<String>,
    /// Number of quantifiers of the input that were relativized.
    pub quantifiers: usize,
}

impl fmt::Display for StageGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variable {
            Some(z) => write!(
                f,
                "{} quantifier(s) bounded by {z}, defined as the set V_{}; minimal ranks are taken inside {z} as well",
                self.quantifiers, self.stage
            ),
            None => write!(f, "no quantifiers to bound (V_{})", self.stage),
        }
    }
}

/// The value of one ε-term or literal under one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denotation {
    pub term: String,
    /// Values of the outer names the term depends on.
    pub assignment: Vec<(String, HfSet)>,
    pub value: HfSet,
}

/// A pure formula equivalent to the input, and the universe to read it in.
#[derive(Debug)]
pub struct TranslationResult {
    pub formula: Formula,
    /// The input universe closed under every denotation and the stage set.
    pub universe: Universe,
    pub guard: StageGuard,
    pub denotations: Vec<Denotation>,
}

/// JSON shape of a [`TranslationResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationAudit {
    pub formula: String,
    pub universe: String,
    pub universe_size: usize,
    pub guard: StageGuard,
    pub guard_text: String,
    pub denotations: Vec<DenotationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenotationJson {
    pub term: String,
    pub assignment: Vec<(String, String)>,
    pub value: String,
}

impl TranslationResult {
    pub fn audit(&self) -> TranslationAudit {
        TranslationAudit {
            formula: self.formula.to_string(),
            universe: self.universe.name().to_string(),
            universe_size: self.universe.len(),
            guard: self.guard.clone(),
            guard_text: self.guard.to_string(),
            denotations: self
                .denotations
                .iter()
                .map(|d| DenotationJson {
                    term: d.term.clone(),
                    assignment: d.assignment.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    value: d.value.to_string(),
                })
                .collect(),
        }
    }
}

/// Replaces each ε-term and literal by a literal definition of its value
/// under `env`, and bounds every quantifier by V_r.
///
/// ε-terms may depend on `env` but not on variables bound in the formula.
pub fn translate_literal(u: &Universe, e: &Formula, env: &Env, budget: u64) -> Result<TranslationResult> {
    Translator::new(u, e, Mode::Literal(env), budget)?.run(e)
}

/// Replaces each ε-term by a formula that identifies its value from the
/// enumeration directly: a disjunction over the formulas up to the body's
/// own index, each case naming the pair ⟨code, parameters⟩ and ruling out
/// every earlier formula. Parameters stay free, so one output serves every
/// assignment.
///
/// Each ε-body must be pure, with at most one free name besides its
/// variable, and enumeration index at most [`MAX_UNIFORM_INDEX`].
pub fn translate_uniform(u: &Universe, e: &Formula, budget: u64) -> Result<TranslationResult> {
    Translator::new(u, e, Mode::Uniform, budget)?.run(e)
}

enum Mode<'a> {
    Literal(&'a Env),
    Uniform,
}

struct Translator<'a> {
    u: &'a Universe,
    stage: u32,
    node_budget: u64,
    mode: Mode<'a>,
    names: NameSupply,
    stage_var: String,
    uses_stage: bool,
    quantifiers: usize,
    seeds: Vec<HfSet>,
    denotations: Vec<Denotation>,
    sem: Semantics<'a>,
}

impl<'a> Translator<'a> {
    fn new(u: &'a Universe, e: &Formula, mode: Mode<'a>, budget: u64) -> Result<Translator<'a>> {
        let stage = u.v_stage_rank().ok_or_else(|| Error::NotVStage(u.name().to_string()))?;
        let mut names = NameSupply::new(e.all_names());
        let stage_var = names.fresh("z");
        Ok(Translator {
            u,
            stage,
            node_budget: LITERAL_NODE_BUDGET,
            mode,
            names,
            stage_var,
            uses_stage: false,
            quantifiers: 0,
            seeds: Vec::new(),
            denotations: Vec::new(),
            sem: Semantics::new(u, budget),
        })
    }

    fn run(mut self, e: &Formula) -> Result<TranslationResult> {
        let body = self.formula(e, &mut Vec::new())?;
        let stage_set = HfSet::from_members(self.u.elements().iter().cloned());
        let formula = if self.uses_stage {
            let z = self.stage_var.clone();
            let def = self.literal(&stage_set, &Term::var(&z))?;
            Formula::exists(&z, Formula::and(def, body))
        } else {
            body
        };
        let nodes = formula.node_count();
        if nodes > self.node_budget {
            return Err(Error::LiteralTooLarge { nodes, budget: self.node_budget });
        }
        let mut seeds = self.seeds;
        seeds.push(stage_set);
        Ok(TranslationResult {
            formula,
            universe: Universe::closure_of(&seeds)?,
            guard: StageGuard {
                stage: self.stage,
                variable: self.uses_stage.then_some(self.stage_var),
                quantifiers: self.quantifiers,
            },
            denotations: self.denotations,
        })
    }

    fn formula(&mut self, f: &Formula, bound: &mut Vec<String>) -> Result<Formula> {
        Ok(match f {
            Formula::Mem(a, b) | Formula::Eq(a, b) => self.atom(f, a, b, bound)?,
            Formula::Not(g) => Formula::not(self.formula(g, bound)?),
            Formula::And(a, b) => Formula::and(self.formula(a, bound)?, self.formula(b, bound)?),
            Formula::Or(a, b) => Formula::or(self.formula(a, bound)?, self.formula(b, bound)?),
            Formula::Implies(a, b) => Formula::implies(self.formula(a, bound)?, self.formula(b, bound)?),
            Formula::Iff(a, b) => Formula::iff(self.formula(a, bound)?, self.formula(b, bound)?),
            Formula::ForAll(v, g) | Formula::Exists(v, g) => {
                self.quantifiers += 1;
                self.uses_stage = true;
                bound.push(v.clone());
                let body = self.formula(g, bound);
                bound.pop();
                let z = Term::var(&self.stage_var);
                match f {
                    Formula::ForAll(..) => forall_in(v, z, body?),
                    _ => exists_in(v, z, body?),
                }
            }
        })
    }

    fn atom(&mut self, f: &Formula, a: &Term, b: &Term, bound: &[String]) -> Result<Formula> {
        let special = |t: &Term| matches!(t, Term::Eps(_) | Term::Lit(_));
        let is_eq = matches!(f, Formula::Eq(..));
        match (special(a), special(b)) {
            (false, false) => return Ok(f.clone()),
            (true, false) if is_eq => return self.define_term(a, b, bound),
            (false, true) if is_eq => return self.define_term(b, a, bound),
            _ => {}
        }
        let mut wrappers = Vec::new();
        let mut side = |t: &Term, this: &mut Self| -> Result<Term> {
            if !special(t) {
                return Ok(t.clone());
            }
            let y = this.names.fresh("y");
            let def = this.define_term(t, &Term::var(&y), bound)?;
            wrappers.push((y.clone(), def));
            Ok(Term::var(&y))
        };
        let (a2, b2) = (side(a, self)?, side(b, self)?);
        let mut out = if is_eq { Formula::eq(a2, b2) } else { Formula::mem(a2, b2) };
        for (y, def) in wrappers.into_iter().rev() {
            out = Formula::exists(&y, Formula::and(def, out));
        }
        Ok(out)
    }

    /// A pure formula saying that `subject` equals the value of `t`.
    fn define_term(&mut self, t: &Term, subject: &Term, bound: &[String]) -> Result<Formula> {
        match t {
            Term::Lit(d) => {
                self.record(t.to_string(), Vec::new(), d.clone());
                self.literal(d, subject)
            }
            Term::Eps(e) => match self.mode {
                Mode::Literal(env) => {
                    let names = eps_free_names(e);
                    if let Some(v) = names.iter().find(|n| bound.contains(n)) {
                        return Err(Error::EpsDependsOnBoundVariable(v.clone()));
                    }
                    let d = self.sem.denote(e, env, &mut Vec::new())?.as_hfset().clone();
                    let assignment = names.iter().filter_map(|n| env.get(n).map(|v| (n.clone(), v.clone()))).collect();
                    self.record(t.to_string(), assignment, d.clone());
                    self.literal(&d, subject)
                }
                Mode::Uniform => self.uniform(e, subject),
            },
            _ => unreachable!("only ε-terms and literals are defined"),
        }
    }

    fn record(&mut self, term: String, assignment: Vec<(String, HfSet)>, value: HfSet) {
        let d = Denotation { term, assignment, value };
        if !self.denotations.contains(&d) {
            self.seeds.push(d.value.clone());
            self.denotations.push(d);
        }
    }

    fn literal(&mut self, d: &HfSet, subject: &Term) -> Result<Formula> {
        define(d, subject, &mut self.names, self.node_budget)
    }

    fn uniform(&mut self, e: &EpsTerm, subject: &Term) -> Result<Formula> {
        if !e.body.is_pure() {
            return Err(Error::NotPure(e.body.to_string()));
        }
        let params = eps_free_names(e);
        if params.len() > 1 {
            return Err(Error::Unsupported(format!(
                "uniform mode handles one parameter per ε-term, `eps[{} | {}]` has {}",
                e.var,
                e.body,
                params.len()
            )));
        }
        let param = params.first().cloned();
        let placeholder = param.clone().unwrap_or_else(|| self.names.fresh("p"));
        let index = index_of(&normalize(&e.body, &e.var, &placeholder)?)?;
        let n = u64::try_from(&index)
            .ok()
            .filter(|n| *n <= MAX_UNIFORM_INDEX)
            .ok_or_else(|| Error::IndexTooLarge { index: index.to_string(), max: MAX_UNIFORM_INDEX })?;
        self.audit_uniform(e, param.as_deref())?;
        self.uses_stage = true;
        let competitors: Vec<CoreFormula> = (0..=n).map(enumerate_u64).collect();
        self.theta(e, &competitors, subject)
    }

    /// Records the term's value for every parameter value in the universe.
    fn audit_uniform(&mut self, e: &EpsTerm, param: Option<&str>) -> Result<()> {
        let values: Vec<Option<HfSet>> = match param {
            Some(_) => self.u.elements().iter().cloned().map(Some).collect(),
            None => vec![None],
        };
        for value in values {
            let mut env = Env::new();
            let mut assignment = Vec::new();
            if let (Some(p), Some(v)) = (param, &value) {
                env.insert(p.to_string(), v.clone());
                assignment.push((p.to_string(), v.clone()));
            }
            let d = self.sem.denote(e, &env, &mut Vec::new())?.as_hfset().clone();
            self.record(format!("eps[{} | {}]", e.var, e.body), assignment, d);
        }
        Ok(())
    }

    /// The disjunction over i ≤ n of "`y` is ⟨⌜ψᵢ⌝, u⟩ where u is the set of
    /// minimal-rank parameters making ψᵢ coextensive with the body, and no
    /// earlier ψⱼ admits such a parameter".
    fn theta(&mut self, e: &EpsTerm, competitors: &[CoreFormula], y: &Term) -> Result<Formula> {
        let z = self.stage_var.clone();
        let x = self.names.fresh("x");
        let phi = relativize(&e.body.rename_free(&e.var, &x), &z);
        let coextensive = |j: usize, s: &str| -> Formula {
            let psi = relativize(&core_relation(&competitors[j], &x, s), &z);
            forall_in(&x, Term::var(&z), Formula::iff(phi.clone(), psi))
        };
        let mut cases = Vec::new();
        for (i, code) in competitors.iter().map(code_formula).enumerate() {
            let minimal = |this: &mut Self, s: &str| -> Formula {
                let s2 = this.names.fresh("s");
                let works = coextensive(i, &s2);
                let below = rank_less_term(&Term::var(&s2), &Term::var(s), this.stage, &mut this.names);
                forall_in(&s2, Term::var(&z), Formula::implies(works, Formula::not(below)))
            };
            let (w, c, u) = (self.names.fresh("w"), self.names.fresh("c"), self.names.fresh("u"));
            let s = self.names.fresh("s");
            let good_in_u = Formula::and(Formula::mem(Term::var(&s), Term::var(&z)), {
                let works = coextensive(i, &s);
                Formula::and(works, minimal(self, &s))
            });
            let good_in_z = {
                let works = coextensive(i, &s);
                Formula::implies(Formula::and(works, minimal(self, &s)), Formula::mem(Term::var(&s), Term::var(&u)))
            };
            let t = self.names.fresh("t");
            let params_set = Formula::and(
                Formula::exists(&t, Formula::mem(Term::var(&t), Term::var(&u))),
                Formula::and(forall_in(&s, Term::var(&u), good_in_u), forall_in(&s, Term::var(&z), good_in_z)),
            );
            let pair = self.pair_is(y, &c, &u);
            let code_def = self.literal(&code, &Term::var(&c))?;
            let shape = exists_in(
                &w,
                y.clone(),
                exists_in(
                    &c,
                    Term::var(&w),
                    exists_in(&u, Term::var(&w), Formula::and(pair, Formula::and(code_def, params_set))),
                ),
            );
            let earlier: Vec<Formula> = (0..i)
                .map(|j| {
                    let s = self.names.fresh("s");
                    let works = coextensive(j, &s);
                    Formula::not(exists_in(&s, Term::var(&z), works))
                })
                .collect();
            cases.push(earlier.into_iter().fold(shape, Formula::and));
        }
        Ok(Formula::disj(cases).expect("index 0 is always a competitor"))
    }

    /// `y = ⟨c, u⟩` for Kuratowski pairs, with every quantifier bounded by `y`
    /// or one of its members.
    fn pair_is(&mut self, y: &Term, c: &str, u: &str) -> Formula {
        let only = |this: &mut Self, w: &str, allowed: &[&str]| -> Formula {
            let k = this.names.fresh("k");
            let eqs = allowed.iter().map(|a| Formula::eq(Term::var(&k), Term::var(a)));
            forall_in(&k, Term::var(w), Formula::disj(eqs).expect("nonempty"))
        };
        let single = |this: &mut Self, w: &str| -> Formula {
            Formula::and(Formula::mem(Term::var(c), Term::var(w)), only(this, w, &[c]))
        };
        let double = |this: &mut Self, w: &str| -> Formula {
            Formula::and(
                Formula::mem(Term::var(c), Term::var(w)),
                Formula::and(Formula::mem(Term::var(u), Term::var(w)), only(this, w, &[c, u])),
            )
        };
        let w1 = self.names.fresh("w");
        let w2 = self.names.fresh("w");
        let w3 = self.names.fresh("w");
        let each = forall_in(&w1, y.clone(), Formula::or(single(self, &w1), double(self, &w1)));
        let has_single = exists_in(&w2, y.clone(), single(self, &w2));
        let has_double = exists_in(&w3, y.clone(), double(self, &w3));
        Formula::and(each, Formula::and(has_single, has_double))
    }
}

fn eps_free_names(e: &EpsTerm) -> Vec<String> {
    let mut names: BTreeSet<String> = e.body.free_names();
    names.remove(&e.var);
    names.into_iter().collect()
}

/// A core formula as a relation between the variables `object` and `param`.
fn core_relation(f: &CoreFormula, object: &str, param: &str) -> Formula {
    f.to_surface(object, param).params_to_vars()
}
