//! The frozen enumeration ψ₀, ψ₁, ψ₂, … of core formulas.
//!
//! Formulas are ordered by serialized length, then lexicographically by token
//! (see [`Token`] for the alphabet order). Polish notation is prefix-free, so
//! the set of well-formed strings of each length is finite and the order is a
//! bijection with the naturals. Ranking and unranking count completions of a
//! stack of pending items; the search stream instead steps through successors.

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::syntax::core::{CoreFormula, Token};

/// Version tag of the enumeration order. Extension objects are only
/// comparable across builds that share it.
pub const ENUMERATION_VERSION: &str = "enum-v1";

/// A hole still to be filled while reading a token string left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Formula(u32),
    Term(u32),
}

const CONNECTIVES: [Token; 5] = [Token::Mem, Token::Eq, Token::Not, Token::And, Token::Exists];

fn candidates(item: Item) -> Vec<Token> {
    match item {
        Item::Formula(_) => CONNECTIVES.to_vec(),
        Item::Term(d) => {
            let mut v = vec![Token::SlotX, Token::SlotP];
            v.extend((0..d).map(Token::Var));
            v
        }
    }
}

/// Children of `item` after emitting `tok`, first child first. `None` when
/// `tok` cannot fill `item`.
fn children(item: Item, tok: Token) -> Option<Vec<Item>> {
    match (item, tok) {
        (Item::Formula(d), Token::Mem | Token::Eq) => Some(vec![Item::Term(d), Item::Term(d)]),
        (Item::Formula(d), Token::Not) => Some(vec![Item::Formula(d)]),
        (Item::Formula(d), Token::And) => Some(vec![Item::Formula(d), Item::Formula(d)]),
        (Item::Formula(d), Token::Exists) => Some(vec![Item::Formula(d + 1)]),
        (Item::Term(_), Token::SlotX | Token::SlotP) => Some(vec![]),
        (Item::Term(d), Token::Var(i)) if i < d => Some(vec![]),
        _ => None,
    }
}

/// Pushes children so that the first child ends up on top of the stack.
fn push_children(stack: &mut Vec<Item>, kids: &[Item]) {
    stack.extend(kids.iter().rev());
}

fn feasible(stack: &[Item], remaining: usize) -> bool {
    let formulas = stack.iter().filter(|i| matches!(i, Item::Formula(_))).count();
    let terms = stack.len() - formulas;
    if formulas == 0 {
        remaining == terms
    } else {
        remaining >= terms + 3 * formulas
    }
}

/// Lexicographically least completion of `stack` using exactly `remaining` tokens.
fn min_completion(mut stack: Vec<Item>, mut remaining: usize, out: &mut Vec<Token>) {
    while let Some(top) = stack.pop() {
        let mut chosen = false;
        for tok in candidates(top) {
            let kids = children(top, tok).expect("candidate fits");
            let mut next = stack.clone();
            push_children(&mut next, &kids);
            if feasible(&next, remaining - 1) {
                out.push(tok);
                stack = next;
                remaining -= 1;
                chosen = true;
                break;
            }
        }
        assert!(chosen, "min_completion called on an infeasible stack");
    }
    debug_assert_eq!(remaining, 0);
}

/// First formula of the given length in lexicographic order (length ≥ 3).
fn first_of_length(len: usize) -> Vec<Token> {
    let mut out = Vec::with_capacity(len);
    min_completion(vec![Item::Formula(0)], len, &mut out);
    out
}

/// Next token string in (length, lex) order.
pub(crate) fn successor(tokens: &[Token]) -> Vec<Token> {
    let len = tokens.len();
    // Pending stacks before each position.
    let mut stacks = Vec::with_capacity(len);
    let mut stack = vec![Item::Formula(0)];
    for &t in tokens {
        stacks.push(stack.clone());
        let top = stack.pop().expect("well-formed input");
        push_children(&mut stack, &children(top, t).expect("well-formed input"));
    }
    for i in (0..len).rev() {
        let mut base = stacks[i].clone();
        let top = base.pop().expect("nonempty stack");
        for tok in candidates(top).into_iter().filter(|c| *c > tokens[i]) {
            let mut next = base.clone();
            push_children(&mut next, &children(top, tok).expect("candidate fits"));
            if feasible(&next, len - i - 1) {
                let mut out = tokens[..i].to_vec();
                out.push(tok);
                min_completion(next, len - i - 1, &mut out);
                return out;
            }
        }
    }
    first_of_length(len + 1)
}

/// Streams ψ₀, ψ₁, … in order without any shared cache.
pub struct FormulaStream {
    next: Vec<Token>,
}

impl FormulaStream {
    pub fn new() -> FormulaStream {
        FormulaStream { next: first_of_length(3) }
    }
}

impl Default for FormulaStream {
    fn default() -> Self {
        FormulaStream::new()
    }
}

impl Iterator for FormulaStream {
    type Item = CoreFormula;

    fn next(&mut self) -> Option<CoreFormula> {
        let current = std::mem::take(&mut self.next);
        self.next = successor(&current);
        Some(CoreFormula::from_tokens(&current).expect("stream emits well-formed strings"))
    }
}

// ---------------------------------------------------------------------------
// Counting

/// Memoized `F(len, depth)`: number of well-formed formulas of exactly `len`
/// tokens whose free de Bruijn indices are all below `depth`.
static COUNTS: Mutex<Option<HashMap<(usize, u32), BigUint>>> = Mutex::new(None);

fn formula_count(len: usize, depth: u32) -> BigUint {
    let mut guard = COUNTS.lock().expect("count table poisoned");
    let table = guard.get_or_insert_with(HashMap::new);
    count_rec(table, len, depth)
}

fn count_rec(table: &mut HashMap<(usize, u32), BigUint>, len: usize, depth: u32) -> BigUint {
    if len < 3 {
        return BigUint::zero();
    }
    if let Some(v) = table.get(&(len, depth)) {
        return v.clone();
    }
    let terms = BigUint::from(2 + depth);
    let mut total = BigUint::zero();
    if len == 3 {
        total += BigUint::from(2u32) * &terms * &terms;
    }
    total += count_rec(table, len - 1, depth);
    for a in 3..len.saturating_sub(3) {
        let b = len - 1 - a;
        if b >= 3 {
            total += count_rec(table, a, depth) * count_rec(table, b, depth);
        }
    }
    total += count_rec(table, len - 1, depth + 1);
    table.insert((len, depth), total.clone());
    total
}

/// Length distribution of the strings that fill one item, for lengths `0..=max`.
fn item_counts(item: Item, max: usize) -> Vec<BigUint> {
    (0..=max)
        .map(|l| match item {
            Item::Formula(d) => formula_count(l, d),
            Item::Term(d) if l == 1 => BigUint::from(2 + d),
            Item::Term(_) => BigUint::zero(),
        })
        .collect()
}

fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let max = a.len() - 1;
    let mut out = vec![BigUint::zero(); max + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(max + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// A pending stack plus the completion-count distribution of each prefix of it.
struct CountingStack {
    items: Vec<Item>,
    /// `convs[k]` counts completions of `items[..k]` by total length.
    convs: Vec<Vec<BigUint>>,
    max: usize,
}

impl CountingStack {
    fn new(root: Item, max: usize) -> CountingStack {
        let mut unit = vec![BigUint::zero(); max + 1];
        unit[0] = BigUint::one();
        let mut s = CountingStack { items: Vec::new(), convs: vec![unit], max };
        s.push(root);
        s
    }

    fn push(&mut self, item: Item) {
        let conv = convolve(self.convs.last().expect("unit"), &item_counts(item, self.max));
        self.items.push(item);
        self.convs.push(conv);
    }

    fn pop(&mut self) -> Option<Item> {
        self.convs.pop();
        self.items.pop()
    }

    fn push_children(&mut self, kids: &[Item]) {
        for k in kids.iter().rev() {
            self.push(*k);
        }
    }

    /// Completions of the current stack (top already popped) after adding
    /// `kids` on top, using exactly `remaining` tokens.
    fn count_with(&self, kids: &[Item], remaining: usize) -> BigUint {
        let rest = self.convs.last().expect("unit");
        let mut dist = vec![BigUint::zero(); remaining + 1];
        dist[0] = BigUint::one();
        for k in kids {
            dist = convolve(&dist, &item_counts(*k, remaining));
        }
        (0..=remaining).fold(BigUint::zero(), |acc, l| {
            if dist[l].is_zero() || rest[remaining - l].is_zero() {
                acc
            } else {
                acc + &dist[l] * &rest[remaining - l]
            }
        })
    }
}

/// Number of core formulas with exactly `len` tokens.
pub fn count_of_length(len: usize) -> BigUint {
    formula_count(len, 0)
}

/// Position of `f` in the enumeration.
pub fn index_of(f: &CoreFormula) -> Result<BigUint> {
    let tokens = f.tokens();
    // Round-trip through the reader rejects ill-formed values.
    CoreFormula::from_tokens(&tokens)?;
    let len = tokens.len();
    let mut index: BigUint = (3..len).map(count_of_length).sum();
    let mut stack = CountingStack::new(Item::Formula(0), len);
    let mut remaining = len;
    for &tok in &tokens {
        let top = stack.pop().ok_or_else(|| Error::NonCanonical("overlong token string".into()))?;
        remaining -= 1;
        for cand in candidates(top).into_iter().filter(|c| *c < tok) {
            let kids = children(top, cand).expect("candidate fits");
            index += stack.count_with(&kids, remaining);
        }
        let kids = children(top, tok).ok_or_else(|| Error::NonCanonical(format!("{tok:?} cannot fill {top:?}")))?;
        stack.push_children(&kids);
    }
    Ok(index)
}

/// The formula at position `n`.
pub fn enumerate(n: &BigUint) -> CoreFormula {
    let mut rank = n.clone();
    let mut len = 3;
    loop {
        let c = count_of_length(len);
        if rank < c {
            break;
        }
        rank -= c;
        len += 1;
    }
    let mut stack = CountingStack::new(Item::Formula(0), len);
    let mut remaining = len;
    let mut tokens = Vec::with_capacity(len);
    while let Some(top) = stack.pop() {
        remaining -= 1;
        let mut chosen = None;
        for cand in candidates(top) {
            let kids = children(top, cand).expect("candidate fits");
            let c = stack.count_with(&kids, remaining);
            if rank < c {
                chosen = Some((cand, kids));
                break;
            }
            rank -= c;
        }
        let (tok, kids) = chosen.expect("rank within level count");
        tokens.push(tok);
        stack.push_children(&kids);
    }
    CoreFormula::from_tokens(&tokens).expect("unranking yields well-formed strings")
}

pub fn enumerate_u64(n: u64) -> CoreFormula {
    enumerate(&BigUint::from(n))
}

/// `index_of` narrowed to `u64`, for indices that fit.
pub fn index_of_u64(f: &CoreFormula) -> Result<Option<u64>> {
    Ok(index_of(f)?.to_u64())
}

// ---------------------------------------------------------------------------
// Shared prefix cache for searches.

static PREFIX: RwLock<Vec<CoreFormula>> = RwLock::new(Vec::new());

/// ψ_start, …, ψ_{end-1}, extending the shared cache as needed.
pub fn enumeration_window(start: usize, end: usize) -> Vec<CoreFormula> {
    {
        let cache = PREFIX.read().expect("prefix cache poisoned");
        if cache.len() >= end {
            return cache[start..end].to_vec();
        }
    }
    let mut cache = PREFIX.write().expect("prefix cache poisoned");
    let mut cursor = cache.last().map(|f| successor(&f.tokens())).unwrap_or_else(|| first_of_length(3));
    while cache.len() < end {
        let next = successor(&cursor);
        cache.push(CoreFormula::from_tokens(&cursor).expect("well-formed"));
        cursor = next;
    }
    cache[start..end].to_vec()
}
