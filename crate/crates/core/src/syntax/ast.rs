//! Surface syntax of the first-order language of set theory, extended with
//! HF literals and ε-terms.

use std::collections::BTreeSet;
use std::fmt;

use crate::hfset::HfSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// `$name`: a named parameter, never bound by a quantifier.
    Param(String),
    Lit(HfSet),
    Eps(Box<EpsTerm>),
}

/// `eps[var | body]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsTerm {
    pub var: String,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Mem(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn param(name: &str) -> Term {
        Term::Param(name.to_string())
    }

    pub fn eps(var: &str, body: Formula) -> Term {
        Term::Eps(Box::new(EpsTerm { var: var.to_string(), body }))
    }

    fn is_pure(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Param(_))
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) | Term::Param(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Lit(_) => {}
            Term::Eps(e) => {
                bound.push(e.var.clone());
                e.body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

impl Formula {
    pub fn mem(a: Term, b: Term) -> Formula {
        Formula::Mem(a, b)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::ForAll(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty iterator.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Pure formulas mention neither ε-terms nor HF literals.
    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => a.is_pure() && b.is_pure(),
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => f.is_pure(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_pure() && b.is_pure()
            }
        }
    }

    /// Names occurring free, whether written `name` or `$name`.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every identifier appearing anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.to_string());
        });
        out
    }

    fn visit_names(&self, f: &mut dyn FnMut(&str)) {
        fn term(t: &Term, f: &mut dyn FnMut(&str)) {
            match t {
                Term::Var(v) | Term::Param(v) => f(v),
                Term::Lit(_) => {}
                Term::Eps(e) => {
                    f(&e.var);
                    e.body.visit_names(f);
                }
            }
        }
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => {
                term(a, f);
                term(b, f);
            }
            Formula::Not(g) => g.visit_names(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Formula::ForAll(v, g) | Formula::Exists(v, g) => {
                f(v);
                g.visit_names(f);
            }
        }
    }

    /// Number of AST nodes, counting terms.
    pub fn node_count(&self) -> u64 {
        fn term(t: &Term) -> u64 {
            match t {
                Term::Eps(e) => 1 + e.body.node_count(),
                _ => 1,
            }
        }
        match self {
            Formula::Mem(a, b) | Formula::Eq(a, b) => 1 + term(a) + term(b),
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => 1 + f.node_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    /// Reads every `$name` as the plain variable `name`.
    pub fn params_to_vars(&self) -> Formula {
        fn t(t: &Term) -> Term {
            match t {
                Term::Param(p) => Term::Var(p.clone()),
                Term::Eps(e) => Term::eps(&e.var, e.body.params_to_vars()),
                other => other.clone(),
            }
        }
        match self {
            Formula::Mem(a, b) => Formula::Mem(t(a), t(b)),
            Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
            Formula::Not(g) => Formula::not(g.params_to_vars()),
            Formula::And(a, b) => Formula::and(a.params_to_vars(), b.params_to_vars()),
            Formula::Or(a, b) => Formula::or(a.params_to_vars(), b.params_to_vars()),
            Formula::Implies(a, b) => Formula::implies(a.params_to_vars(), b.params_to_vars()),
            Formula::Iff(a, b) => Formula::iff(a.params_to_vars(), b.params_to_vars()),
            Formula::ForAll(v, g) => Formula::forall(v, g.params_to_vars()),
            Formula::Exists(v, g) => Formula::exists(v, g.params_to_vars()),
        }
    }

    /// Capture-avoiding substitution of the free variable `from` by the variable `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let mut avoid = self.all_names();
        avoid.insert(to.to_string());
        self.rename_inner(from, to, &mut avoid)
    }

    fn rename_inner(&self, from: &str, to: &str, avoid: &mut BTreeSet<String>) -> Formula {
        let term = |t: &Term, avoid: &mut BTreeSet<String>| -> Term {
            match t {
                Term::Var(v) if v == from => Term::Var(to.to_string()),
                Term::Eps(e) if e.var != from => {
                    let (var, body) = rebind(&e.var, &e.body, from, to, avoid);
                    Term::Eps(Box::new(EpsTerm { var, body }))
                }
                other => other.clone(),
            }
        };
        match self {
            Formula::Mem(a, b) => Formula::Mem(term(a, avoid), term(b, avoid)),
            Formula::Eq(a, b) => Formula::Eq(term(a, avoid), term(b, avoid)),
            Formula::Not(f) => Formula::not(f.rename_inner(from, to, avoid)),
            Formula::And(a, b) => Formula::and(a.rename_inner(from, to, avoid), b.rename_inner(from, to, avoid)),
            Formula::Or(a, b) => Formula::or(a.rename_inner(from, to, avoid), b.rename_inner(from, to, avoid)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_inner(from, to, avoid), b.rename_inner(from, to, avoid))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_inner(from, to, avoid), b.rename_inner(from, to, avoid)),
            Formula::ForAll(v, f) | Formula::Exists(v, f) => {
                let (v2, body) = if v == from { (v.clone(), (**f).clone()) } else { rebind(v, f, from, to, avoid) };
                match self {
                    Formula::ForAll(..) => Formula::ForAll(v2, Box::new(body)),
                    _ => Formula::Exists(v2, Box::new(body)),
                }
            }
        }
    }
}

/// Renames inside a binder for `v`; if `v` would capture `to`, the binder is
/// first renamed to a fresh name.
fn rebind(v: &str, body: &Formula, from: &str, to: &str, avoid: &mut BTreeSet<String>) -> (String, Formula) {
    if v == to && body.free_names().contains(from) {
        let fresh = fresh_name(v, avoid);
        avoid.insert(fresh.clone());
        let body = body.rename_inner(v, &fresh, avoid);
        (fresh.clone(), body.rename_inner(from, to, avoid))
    } else {
        (v.to_string(), body.rename_inner(from, to, avoid))
    }
}

pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (0..).map(|k| format!("{base}{k}")).find(|n| !avoid.contains(n)).expect("unbounded")
}

// Printing: precedence climbing that parenthesizes only where the grammar needs it.

const P_IFF: u8 = 1;
const P_IMP: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_UNARY: u8 = 5;

impl Formula {
    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => P_IFF,
            Formula::Implies(..) => P_IMP,
            Formula::Or(..) => P_OR,
            Formula::And(..) => P_AND,
            _ => P_UNARY,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Mem(a, b) => write!(f, "{a} in {b}")?,
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(g) => {
                f.write_str("not ")?;
                g.write_prec(f, P_UNARY)?;
            }
            Formula::ForAll(v, g) => {
                write!(f, "all {v} ")?;
                g.write_prec(f, P_UNARY)?;
            }
            Formula::Exists(v, g) => {
                write!(f, "ex {v} ")?;
                g.write_prec(f, P_UNARY)?;
            }
            Formula::And(a, b) => {
                a.write_prec(f, P_AND)?;
                f.write_str(" and ")?;
                b.write_prec(f, P_UNARY)?;
            }
            Formula::Or(a, b) => {
                a.write_prec(f, P_OR)?;
                f.write_str(" or ")?;
                b.write_prec(f, P_AND)?;
            }
            Formula::Implies(a, b) => {
                a.write_prec(f, P_OR)?;
                f.write_str(" -> ")?;
                b.write_prec(f, P_IMP)?;
            }
            Formula::Iff(a, b) => {
                a.write_prec(f, P_IFF)?;
                f.write_str(" <-> ")?;
                b.write_prec(f, P_IMP)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Param(v) => write!(f, "${v}"),
            Term::Lit(s) => write!(f, "{s}"),
            Term::Eps(e) => write!(f, "eps[{} | {}]", e.var, e.body),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_parenthesizes_minimally() {
        let f = Formula::forall(
            "x",
            Formula::implies(Formula::mem(Term::var("x"), Term::var("p")), Formula::eq(Term::var("x"), Term::var("x"))),
        );
        assert_eq!(f.to_string(), "all x (x in p -> x = x)");
        let g = Formula::implies(
            Formula::implies(Formula::eq(Term::var("a"), Term::var("a")), Formula::eq(Term::var("b"), Term::var("b"))),
            Formula::eq(Term::var("c"), Term::var("c")),
        );
        assert_eq!(g.to_string(), "(a = a -> b = b) -> c = c");
    }

    #[test]
    fn free_names_see_through_eps() {
        let f = Formula::eq(Term::var("y"), Term::eps("x", Formula::mem(Term::var("x"), Term::param("p"))));
        let names: Vec<_> = f.free_names().into_iter().collect();
        assert_eq!(names, vec!["p".to_string(), "y".to_string()]);
        assert!(!f.is_pure());
    }

    #[test]
    fn rename_avoids_capture() {
        // all x (x in y), substitute y := x
        let f = Formula::forall("x", Formula::mem(Term::var("x"), Term::var("y")));
        let g = f.rename_free("y", "x");
        match &g {
            Formula::ForAll(v, body) => {
                assert_ne!(v, "x");
                assert_eq!(**body, Formula::mem(Term::var(v), Term::var("x")));
            }
            _ => panic!("shape changed: {g}"),
        }
    }
}
