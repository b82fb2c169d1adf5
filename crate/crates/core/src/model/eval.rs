//! Tarski evaluation over a [`Universe`].
//!
//! Formulas are compiled to a slot-addressed tree first: free names become
//! constants, bound variables become stack positions. Quantifiers of the
//! shape `∃t (t ∈ g ∧ φ)` and `∀t (t ∈ g → φ)` iterate over the members of
//! `g` only; values outside the universe are handled by deciding membership
//! in the ambient HF world.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::universe::Universe;
use crate::syntax::{CoreFormula, CoreTerm, Formula, Term};

/// Assignment of free names (written `x` or `$x`) to sets.
pub type Env = BTreeMap<String, HfSet>;

/// A value during evaluation: an element of the universe, or an outside set
/// together with the positions of the universe elements it contains.
#[derive(Clone, Debug)]
pub enum Point {
    Elem(u32),
    Outside(Arc<OutsidePoint>),
}

#[derive(Debug)]
pub struct OutsidePoint {
    pub set: HfSet,
    pub inside: BitSet,
}

impl Point {
    pub fn of(u: &Universe, x: &HfSet) -> Point {
        match u.position(x) {
            Some(p) => Point::Elem(p as u32),
            None => {
                let inside = BitSet::from_positions(u.len(), x.members().iter().filter_map(|m| u.position(m)));
                Point::Outside(Arc::new(OutsidePoint { set: x.clone(), inside }))
            }
        }
    }

    pub fn to_set(&self, u: &Universe) -> HfSet {
        match self {
            Point::Elem(i) => u.element(*i as usize).clone(),
            Point::Outside(o) => o.set.clone(),
        }
    }
}

fn point_mem(u: &Universe, a: &Point, b: &Point) -> bool {
    match (a, b) {
        (Point::Elem(i), Point::Elem(j)) => u.has_member(*j as usize, *i as usize),
        (Point::Elem(i), Point::Outside(o)) => o.inside.contains(*i as usize),
        // Members of elements are elements.
        (Point::Outside(_), Point::Elem(_)) => false,
        (Point::Outside(x), Point::Outside(y)) => y.set.contains(&x.set),
    }
}

fn point_eq(a: &Point, b: &Point) -> bool {
    match (a, b) {
        (Point::Elem(i), Point::Elem(j)) => i == j,
        (Point::Outside(x), Point::Outside(y)) => x.set == y.set,
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Operand {
    Slot(usize),
    Const(Point),
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Mem(Operand, Operand),
    Eq(Operand, Operand),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists(Box<Node>),
    ForAll(Box<Node>),
    ExistsIn(Operand, Box<Node>),
    ForAllIn(Operand, Box<Node>),
    Bool(bool),
}

/// A compiled formula. The first `inputs` stack slots are supplied by the
/// caller; quantifiers push above them.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    root: Node,
    inputs: usize,
}

impl Compiled {
    pub(crate) fn eval(&self, u: &Universe, inputs: &[Point]) -> bool {
        debug_assert_eq!(inputs.len(), self.inputs);
        let mut stack = inputs.to_vec();
        eval_node(u, &self.root, &mut stack)
    }
}

fn resolve<'a>(op: &'a Operand, stack: &'a [Point]) -> &'a Point {
    match op {
        Operand::Slot(i) => &stack[*i],
        Operand::Const(p) => p,
    }
}

fn eval_node(u: &Universe, n: &Node, stack: &mut Vec<Point>) -> bool {
    match n {
        Node::Mem(a, b) => point_mem(u, resolve(a, stack), resolve(b, stack)),
        Node::Eq(a, b) => point_eq(resolve(a, stack), resolve(b, stack)),
        Node::Not(f) => !eval_node(u, f, stack),
        Node::And(a, b) => eval_node(u, a, stack) && eval_node(u, b, stack),
        Node::Or(a, b) => eval_node(u, a, stack) || eval_node(u, b, stack),
        Node::Implies(a, b) => !eval_node(u, a, stack) || eval_node(u, b, stack),
        Node::Iff(a, b) => eval_node(u, a, stack) == eval_node(u, b, stack),
        Node::Exists(f) => (0..u.len()).any(|i| with_pushed(u, f, stack, i as u32)),
        Node::ForAll(f) => (0..u.len()).all(|i| with_pushed(u, f, stack, i as u32)),
        Node::ExistsIn(g, f) => {
            let ms = guard_members(u, resolve(g, stack));
            ms.into_iter().any(|i| with_pushed(u, f, stack, i))
        }
        Node::ForAllIn(g, f) => {
            let ms = guard_members(u, resolve(g, stack));
            ms.into_iter().all(|i| with_pushed(u, f, stack, i))
        }
        Node::Bool(b) => *b,
    }
}

fn with_pushed(u: &Universe, f: &Node, stack: &mut Vec<Point>, i: u32) -> bool {
    stack.push(Point::Elem(i));
    let r = eval_node(u, f, stack);
    stack.pop();
    r
}

fn guard_members(u: &Universe, g: &Point) -> Vec<u32> {
    match g {
        Point::Elem(j) => u.members_of(*j as usize).to_vec(),
        Point::Outside(o) => o.inside.ones().map(|i| i as u32).collect(),
    }
}

// Surface compilation.

struct SurfaceCompiler<'a> {
    u: &'a Universe,
    env: &'a BTreeMap<String, Point>,
    /// Bound names with their stack slots, innermost last.
    bound: Vec<(String, usize)>,
    depth: usize,
}

impl SurfaceCompiler<'_> {
    fn term(&self, t: &Term) -> Result<Operand> {
        match t {
            Term::Var(v) => {
                if let Some((_, slot)) = self.bound.iter().rev().find(|(n, _)| n == v) {
                    return Ok(Operand::Slot(*slot));
                }
                self.free(v)
            }
            Term::Param(v) => self.free(v),
            Term::Lit(s) => Ok(Operand::Const(Point::of(self.u, s))),
            Term::Eps(_) => Err(Error::NotPure(t.to_string())),
        }
    }

    fn free(&self, v: &str) -> Result<Operand> {
        self.env.get(v).cloned().map(Operand::Const).ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn formula(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Mem(a, b) => Node::Mem(self.term(a)?, self.term(b)?),
            Formula::Eq(a, b) => Node::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.formula(g)?)),
            Formula::And(a, b) => Node::And(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Exists(v, body) => {
                if let Formula::And(first, rest) = &**body {
                    if let Some(g) = guard_of(v, first) {
                        let g = self.term(g)?;
                        return Ok(Node::ExistsIn(g, Box::new(self.bind(v, rest)?)));
                    }
                }
                Node::Exists(Box::new(self.bind(v, body)?))
            }
            Formula::ForAll(v, body) => {
                // ∀t ¬ t ∈ g: g has no members in the universe.
                if let Formula::Not(inner) = &**body {
                    if let Some(g) = guard_of(v, inner) {
                        return Ok(Node::ForAllIn(self.term(g)?, Box::new(Node::Bool(false))));
                    }
                }
                if let Formula::Implies(first, rest) = &**body {
                    if let Some(g) = guard_of(v, first) {
                        let g = self.term(g)?;
                        return Ok(Node::ForAllIn(g, Box::new(self.bind(v, rest)?)));
                    }
                }
                Node::ForAll(Box::new(self.bind(v, body)?))
            }
        })
    }

    fn bind(&mut self, v: &str, body: &Formula) -> Result<Node> {
        self.bound.push((v.to_string(), self.depth));
        self.depth += 1;
        let r = self.formula(body);
        self.depth -= 1;
        self.bound.pop();
        r
    }
}

/// For `v ∈ g` with `g` not the variable `v` itself, returns `g`.
fn guard_of<'f>(v: &str, f: &'f Formula) -> Option<&'f Term> {
    match f {
        Formula::Mem(Term::Var(a), g) if a == v && !matches!(g, Term::Var(b) if b == v) => Some(g),
        _ => None,
    }
}

/// Compiles a formula whose free names are resolved from `env`, except for
/// `inputs`, which become the leading stack slots in order.
pub(crate) fn compile_surface(u: &Universe, f: &Formula, env: &Env, inputs: &[&str]) -> Result<Compiled> {
    let points: BTreeMap<String, Point> = env.iter().map(|(k, v)| (k.clone(), Point::of(u, v))).collect();
    let mut c = SurfaceCompiler { u, env: &points, bound: Vec::new(), depth: inputs.len() };
    for (i, name) in inputs.iter().enumerate() {
        c.bound.push((name.to_string(), i));
    }
    let root = c.formula(f)?;
    Ok(Compiled { root, inputs: inputs.len() })
}

/// Truth of a pure (or literal-bearing) formula under `env`; quantifiers range over `u`.
pub fn eval(u: &Universe, f: &Formula, env: &Env) -> Result<bool> {
    Ok(compile_surface(u, f, env, &[])?.eval(u, &[]))
}

/// `{x ∈ u : f}` with `var` as the object variable.
pub fn surface_extension(u: &Universe, f: &Formula, var: &str, env: &Env) -> Result<BitSet> {
    let c = compile_surface(u, f, env, &[var])?;
    let mut bits = BitSet::new(u.len());
    for i in 0..u.len() {
        if c.eval(u, &[Point::Elem(i as u32)]) {
            bits.insert(i);
        }
    }
    Ok(bits)
}

// Core compilation: slot 0 is X, slot 1 is P.

pub(crate) fn compile_core(f: &CoreFormula) -> Compiled {
    Compiled { root: core_node(f, 0), inputs: 2 }
}

fn core_operand(t: CoreTerm, depth: usize) -> Operand {
    match t {
        CoreTerm::X => Operand::Slot(0),
        CoreTerm::P => Operand::Slot(1),
        CoreTerm::Var(i) => Operand::Slot(2 + depth - 1 - i as usize),
    }
}

fn core_node(f: &CoreFormula, depth: usize) -> Node {
    match f {
        CoreFormula::Mem(a, b) => Node::Mem(core_operand(*a, depth), core_operand(*b, depth)),
        CoreFormula::Eq(a, b) => Node::Eq(core_operand(*a, depth), core_operand(*b, depth)),
        CoreFormula::Not(g) => Node::Not(Box::new(core_node(g, depth))),
        CoreFormula::And(a, b) => Node::And(Box::new(core_node(a, depth)), Box::new(core_node(b, depth))),
        CoreFormula::Exists(body) => {
            if let CoreFormula::Mem(CoreTerm::Var(0), g) = **body {
                if g != CoreTerm::Var(0) {
                    return Node::ExistsIn(core_operand(g, depth + 1), Box::new(Node::Bool(true)));
                }
            }
            if let CoreFormula::And(first, rest) = &**body {
                if let CoreFormula::Mem(CoreTerm::Var(0), g) = **first {
                    if g != CoreTerm::Var(0) {
                        return Node::ExistsIn(core_operand(g, depth + 1), Box::new(core_node(rest, depth + 1)));
                    }
                }
            }
            Node::Exists(Box::new(core_node(body, depth + 1)))
        }
    }
}

/// Truth of a core formula at X := `x`, P := `p`.
pub fn eval_core(u: &Universe, f: &CoreFormula, x: &HfSet, p: &HfSet) -> bool {
    compile_core(f).eval(u, &[Point::of(u, x), Point::of(u, p)])
}

/// Positions of the elements satisfying `f` with P := `p`.
pub fn core_extension(u: &Universe, f: &CoreFormula, p: &Point) -> BitSet {
    let c = compile_core(f);
    core_extension_compiled(u, &c, p)
}

pub(crate) fn core_extension_compiled(u: &Universe, c: &Compiled, p: &Point) -> BitSet {
    let mut bits = BitSet::new(u.len());
    let mut inputs = [Point::Elem(0), p.clone()];
    for i in 0..u.len() {
        inputs[0] = Point::Elem(i as u32);
        if c.eval(u, &inputs) {
            bits.insert(i);
        }
    }
    bits
}
