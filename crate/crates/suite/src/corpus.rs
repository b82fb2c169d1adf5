//! Seeded random formulas for the acceptance battery.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hf_frege::syntax::{Formula, Term};
use hf_frege::HfSet;

/// Names quantifiers may bind. Reusing `x` and `y` makes some formulas
/// shadow their own free variables.
const BINDERS: [&str; 5] = ["z", "t", "s", "x", "y"];

pub struct FormulaGen {
    rng: ChaCha8Rng,
}

/// Which terms the generator may use at atoms.
#[derive(Clone, Copy)]
struct TermKinds {
    params: &'static [&'static str],
    literals: bool,
    eps: bool,
}

const PURE: TermKinds = TermKinds { params: &[], literals: false, eps: false };

impl FormulaGen {
    pub fn new(seed: u64) -> FormulaGen {
        FormulaGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A pure formula whose free variables are among `free`, with at most
    /// `quantifiers` nested quantifiers.
    pub fn pure(&mut self, free: &[&str], size: u32, quantifiers: u32) -> Formula {
        let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        self.formula(&mut scope, size, quantifiers, PURE)
    }

    /// A candidate truth predicate in `y` (code) and `x` (object).
    pub fn predicate(&mut self) -> Formula {
        let size = self.rng.gen_range(1..=7);
        self.pure(&["y", "x"], size, 2)
    }

    /// An extended formula over the parameters `$p` and `$q` that mentions
    /// at least one ε-term. ε-bodies depend on parameters only, never on
    /// variables bound outside them.
    pub fn extended(&mut self) -> Formula {
        const KINDS: TermKinds = TermKinds { params: &["p", "q"], literals: true, eps: true };
        loop {
            let size = self.rng.gen_range(1..=5);
            let f = self.formula(&mut Vec::new(), size, 2, KINDS);
            if f.to_string().contains("eps[") {
                return f;
            }
        }
    }

    /// Anything the surface grammar allows, for printer/parser round trips.
    pub fn any(&mut self) -> Formula {
        const KINDS: TermKinds = TermKinds { params: &["p", "q", "x"], literals: true, eps: true };
        let size = self.rng.gen_range(1..=9);
        let mut scope = vec!["x".to_string(), "y".to_string()];
        self.formula(&mut scope, size, 3, KINDS)
    }

    fn formula(&mut self, scope: &mut Vec<String>, size: u32, quantifiers: u32, kinds: TermKinds) -> Formula {
        if size <= 1 {
            return self.atom(scope, kinds);
        }
        let choice = self.rng.gen_range(0..if quantifiers > 0 { 7 } else { 5 });
        match choice {
            0 => Formula::not(self.formula(scope, size - 1, quantifiers, kinds)),
            1..=4 => {
                let left = self.rng.gen_range(1..size);
                let a = self.formula(scope, left, quantifiers, kinds);
                let b = self.formula(scope, size - left, quantifiers, kinds);
                match choice {
                    1 => Formula::and(a, b),
                    2 => Formula::or(a, b),
                    3 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
            _ => {
                let v = BINDERS.choose(&mut self.rng).expect("nonempty").to_string();
                scope.push(v.clone());
                let body = self.formula(scope, size - 1, quantifiers - 1, kinds);
                scope.pop();
                if choice == 5 {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                }
            }
        }
    }

    fn atom(&mut self, scope: &[String], kinds: TermKinds) -> Formula {
        let a = self.term(scope, kinds);
        let b = self.term(scope, kinds);
        if self.rng.gen_bool(0.5) {
            Formula::mem(a, b)
        } else {
            Formula::eq(a, b)
        }
    }

    fn term(&mut self, scope: &[String], kinds: TermKinds) -> Term {
        let roll = self.rng.gen_range(0..10);
        if kinds.eps && roll == 0 {
            let var = ["x", "w"].choose(&mut self.rng).expect("nonempty").to_string();
            let size = self.rng.gen_range(1..=3);
            // A fresh scope: the body sees its own variable and the parameters only.
            let inner = TermKinds { eps: self.rng.gen_bool(0.2), ..kinds };
            let body = self.formula(&mut vec![var.clone()], size, 1, inner);
            return Term::eps(&var, body);
        }
        if kinds.literals && roll == 1 {
            let n = if self.rng.gen_bool(0.9) { self.rng.gen_range(0..16) } else { self.rng.gen_range(0..1 << 20) };
            return Term::Lit(HfSet::from_ackermann_index(n));
        }
        if !kinds.params.is_empty() && (scope.is_empty() || roll >= 8) {
            return Term::param(kinds.params.choose(&mut self.rng).expect("nonempty"));
        }
        match scope.choose(&mut self.rng) {
            Some(v) => Term::var(v),
            // Closed pure formulas with nothing in scope fall back to ∅.
            None => Term::Lit(HfSet::empty()),
        }
    }
}
