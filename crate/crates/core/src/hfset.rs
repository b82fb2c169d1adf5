//! Hereditarily finite sets in canonical form.
//!
//! An [`HfSet`] stores its members deduplicated and sorted by Ackermann index,
//! so structural equality is set equality. The Ackermann coding
//! `a(x) = Σ_{y∈x} 2^a(y)` is a bijection with the naturals and doubles as the
//! global well-order used everywhere else in the crate.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the bit length of an Ackermann index (2^24 bits).
pub const DEFAULT_INDEX_BITS: u64 = 1 << 24;

/// Indices below this bound print as `#n`.
pub const SHORTHAND_LIMIT: u64 = 1 << 16;

#[derive(Clone)]
pub struct HfSet(Arc<Node>);

struct Node {
    members: Box<[HfSet]>,
    rank: u32,
    hash: u64,
    /// Ackermann index when it fits in 64 bits.
    small_index: Option<u64>,
    index: OnceLock<BigUint>,
}

impl HfSet {
    pub fn empty() -> HfSet {
        static EMPTY: OnceLock<HfSet> = OnceLock::new();
        EMPTY.get_or_init(|| HfSet::from_sorted(Vec::new())).clone()
    }

    /// Builds the set whose members are exactly the distinct elements of `ms`.
    pub fn from_members<I: IntoIterator<Item = HfSet>>(ms: I) -> HfSet {
        let mut members: Vec<HfSet> = ms.into_iter().collect();
        members.sort();
        members.dedup();
        HfSet::from_sorted(members)
    }

    /// `members` must already be strictly increasing in Ackermann order.
    pub(crate) fn from_sorted(members: Vec<HfSet>) -> HfSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let rank = members.iter().map(|m| m.rank() + 1).max().unwrap_or(0);
        let mut hasher = DefaultHasher::new();
        members.len().hash(&mut hasher);
        for m in &members {
            m.0.hash.hash(&mut hasher);
        }
        let small_index = members.iter().try_fold(0u64, |acc, m| match m.0.small_index {
            Some(i) if i < 64 => Some(acc | (1u64 << i)),
            _ => None,
        });
        HfSet(Arc::new(Node {
            members: members.into_boxed_slice(),
            rank,
            hash: hasher.finish(),
            small_index,
            index: OnceLock::new(),
        }))
    }

    pub fn singleton(x: HfSet) -> HfSet {
        HfSet::from_sorted(vec![x])
    }

    pub fn members(&self) -> &[HfSet] {
        &self.0.members
    }

    pub fn cardinality(&self) -> usize {
        self.0.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.members.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn contains(&self, y: &HfSet) -> bool {
        y.rank() < self.rank() && self.0.members.binary_search(y).is_ok()
    }

    /// The Ackermann index if it is below 2^64.
    pub fn small_index(&self) -> Option<u64> {
        self.0.small_index
    }

    /// Ackermann index under the default bit budget.
    pub fn ackermann_index(&self) -> Result<BigUint> {
        self.ackermann_index_within(DEFAULT_INDEX_BITS)
    }

    /// Ackermann index, failing with [`Error::IndexOverflow`] when the result
    /// would need more than `max_bits` bits.
    pub fn ackermann_index_within(&self, max_bits: u64) -> Result<BigUint> {
        if let Some(v) = self.0.index.get() {
            return if v.bits() <= max_bits { Ok(v.clone()) } else { Err(Error::IndexOverflow { budget: max_bits }) };
        }
        if let Some(i) = self.0.small_index {
            let v = BigUint::from(i);
            if v.bits() > max_bits {
                return Err(Error::IndexOverflow { budget: max_bits });
            }
            return Ok(self.0.index.get_or_init(|| v).clone());
        }
        let mut acc = BigUint::zero();
        for m in self.0.members.iter().rev() {
            let bit = m.ackermann_index_within(max_bits)?;
            let bit = bit.to_u64().filter(|b| *b < max_bits).ok_or(Error::IndexOverflow { budget: max_bits })?;
            acc.set_bit(bit, true);
        }
        Ok(self.0.index.get_or_init(|| acc).clone())
    }

    pub fn from_ackermann_index(n: u64) -> HfSet {
        let members = (0..64).filter(|b| n >> b & 1 == 1).map(HfSet::from_ackermann_index).collect();
        HfSet::from_sorted(members)
    }

    pub fn from_big_index(n: &BigUint) -> HfSet {
        if let Some(small) = n.to_u64() {
            return HfSet::from_ackermann_index(small);
        }
        let members = (0..n.bits()).filter(|b| n.bit(*b)).map(HfSet::from_ackermann_index).collect();
        HfSet::from_sorted(members)
    }

    /// The von Neumann natural `{0, 1, ..., n-1}`.
    pub fn von_neumann(n: usize) -> HfSet {
        let mut built: Vec<HfSet> = Vec::with_capacity(n);
        for _ in 0..n {
            let next = HfSet::from_sorted(built.clone());
            built.push(next);
        }
        HfSet::from_sorted(built)
    }

    /// Returns `n` when the set is the von Neumann natural `n`.
    pub fn as_von_neumann(&self) -> Option<usize> {
        let n = self.cardinality();
        if self.rank() as usize != n {
            return None;
        }
        // Members are sorted and vn(i) < vn(i+1), so member i must be vn(i).
        for (i, m) in self.members().iter().enumerate() {
            if m.cardinality() != i || m.as_von_neumann() != Some(i) {
                return None;
            }
        }
        Some(n)
    }

    /// All hereditary members of `x`; `x` itself is included only if it is one of them.
    pub fn transitive_closure(&self) -> HfSet {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<HfSet> = self.members().to_vec();
        while let Some(y) = stack.pop() {
            if seen.insert(y.clone()) {
                stack.extend(y.members().iter().cloned());
            }
        }
        HfSet::from_sorted(seen.into_iter().collect())
    }

    /// `{{a}, {a, b}}`.
    pub fn kuratowski_pair(a: &HfSet, b: &HfSet) -> HfSet {
        let single = HfSet::singleton(a.clone());
        if a == b {
            return HfSet::singleton(single);
        }
        let double = HfSet::from_members([a.clone(), b.clone()]);
        HfSet::from_members([single, double])
    }

    pub fn unpair(&self) -> Result<(HfSet, HfSet)> {
        let bad = || Error::NotAPair(self.to_string());
        match self.members() {
            [only] => match only.members() {
                [a] => Ok((a.clone(), a.clone())),
                _ => Err(bad()),
            },
            [m0, m1] => {
                let (single, double) = if m0.cardinality() == 1 { (m0, m1) } else { (m1, m0) };
                let [a] = single.members() else {
                    return Err(bad());
                };
                match double.members() {
                    [d0, d1] if d0 == a => Ok((a.clone(), d1.clone())),
                    [d0, d1] if d1 == a => Ok((a.clone(), d0.clone())),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }

    /// Right-nested Kuratowski tuple `⟨x0, ⟨x1, ... ⟩⟩`; a single item is itself.
    pub fn tuple(items: &[HfSet]) -> HfSet {
        match items {
            [] => HfSet::empty(),
            [one] => one.clone(),
            [first, rest @ ..] => HfSet::kuratowski_pair(first, &HfSet::tuple(rest)),
        }
    }

    fn cmp_ackermann(&self, other: &HfSet) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        if let (Some(a), Some(b)) = (self.0.small_index, other.0.small_index) {
            return a.cmp(&b);
        }
        // Compare as binary numbers: highest set bits first.
        let mut xs = self.members().iter().rev();
        let mut ys = other.members().iter().rev();
        loop {
            match (xs.next(), ys.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.cmp_ackermann(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.0.rank == other.0.rank && self.0.members == other.0.members)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_ackermann(other)
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for HfSet {
    fn default() -> Self {
        HfSet::empty()
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.small_index {
            Some(i) if i < SHORTHAND_LIMIT => write!(f, "#{i}"),
            _ => {
                f.write_str("{")?;
                for (k, m) in self.members().iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from the HF literal reader: byte offset and what was expected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    pub offset: usize,
    pub expected: &'static str,
}

/// Reads one literal `{...}` or `#digits` starting at byte `pos` of `src`,
/// skipping whitespace. Returns the set and the offset just past it.
pub fn read_literal(src: &str, pos: usize) -> std::result::Result<(HfSet, usize), LiteralError> {
    let bytes = src.as_bytes();
    let skip_ws = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_whitespace() {
            p += 1;
        }
        p
    };
    let p = skip_ws(pos);
    match bytes.get(p) {
        Some(b'#') => {
            let start = p + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return Err(LiteralError { offset: start, expected: "digits" });
            }
            let n: BigUint = src[start..end].parse().map_err(|_| LiteralError { offset: start, expected: "digits" })?;
            Ok((HfSet::from_big_index(&n), end))
        }
        Some(b'{') => {
            let mut members = Vec::new();
            let mut p = skip_ws(p + 1);
            if bytes.get(p) == Some(&b'}') {
                return Ok((HfSet::empty(), p + 1));
            }
            loop {
                let (m, next) = read_literal(src, p)?;
                members.push(m);
                p = skip_ws(next);
                match bytes.get(p) {
                    Some(b',') => p += 1,
                    Some(b'}') => return Ok((HfSet::from_members(members), p + 1)),
                    _ => return Err(LiteralError { offset: p, expected: "',' or '}'" }),
                }
            }
        }
        _ => Err(LiteralError { offset: p, expected: "'{' or '#'" }),
    }
}

impl FromStr for HfSet {
    type Err = LiteralError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (set, end) = read_literal(s, 0)?;
        if s[end..].trim().is_empty() {
            Ok(set)
        } else {
            Err(LiteralError { offset: end, expected: "end of input" })
        }
    }
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad HF literal at offset {}: expected {}", self.offset, self.expected)
    }
}

impl std::error::Error for LiteralError {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e() -> HfSet {
        HfSet::empty()
    }

    fn v3() -> Vec<HfSet> {
        (0..4).map(HfSet::from_ackermann_index).collect()
    }

    #[test]
    fn empty_set_basics() {
        assert!(e().is_empty());
        assert_eq!(e().rank(), 0);
        assert_eq!(e().ackermann_index().unwrap(), BigUint::zero());
    }

    #[test]
    fn from_members_dedups_and_orders() {
        let one = HfSet::singleton(e());
        assert_eq!(HfSet::from_members([e()]), one);
        assert_eq!(HfSet::from_members([e(), e()]), one);
        let two = HfSet::singleton(one.clone());
        let s = HfSet::from_members([two.clone(), e()]);
        assert_eq!(s.members(), &[e(), two]);
    }

    #[test]
    fn small_indices() {
        let one = HfSet::singleton(e());
        let two = HfSet::singleton(one.clone());
        let three = HfSet::from_members([e(), one.clone()]);
        assert_eq!(one.ackermann_index().unwrap(), 1u32.into());
        assert_eq!(two.ackermann_index().unwrap(), 2u32.into());
        assert_eq!(three.ackermann_index().unwrap(), 3u32.into());
        assert_eq!(HfSet::from_ackermann_index(3), three);
        assert_eq!(HfSet::from_ackermann_index(11), HfSet::von_neumann(3));
    }

    #[test]
    fn index_overflow_is_reported() {
        // vn(5) has index 2^2059 + 2059, which needs 2060 bits.
        let big = HfSet::von_neumann(5);
        assert!(matches!(big.ackermann_index_within(2000), Err(Error::IndexOverflow { budget: 2000 })));
        assert_eq!(big.ackermann_index_within(4096).unwrap().bits(), 2060);
    }

    #[test]
    fn ranks() {
        assert_eq!(HfSet::from_ackermann_index(3).rank(), 2);
        for a in v3() {
            for b in v3() {
                let p = HfSet::kuratowski_pair(&a, &b);
                assert_eq!(p.rank(), a.rank().max(b.rank()) + 2);
            }
        }
    }

    #[test]
    fn pairs() {
        assert_eq!(HfSet::kuratowski_pair(&e(), &e()), HfSet::singleton(HfSet::singleton(e())));
        for a in v3() {
            for b in v3() {
                assert_eq!(HfSet::kuratowski_pair(&a, &b).unpair().unwrap(), (a.clone(), b));
            }
        }
        assert!(matches!(HfSet::singleton(e()).unpair(), Err(Error::NotAPair(_))));
        assert!(e().unpair().is_err());
        // {{a},{b}} with a != b
        let bad = HfSet::from_members([HfSet::singleton(e()), HfSet::singleton(HfSet::singleton(e()))]);
        assert!(bad.unpair().is_err());
    }

    #[test]
    fn naturals_and_closure() {
        assert_eq!(HfSet::von_neumann(2), HfSet::from_ackermann_index(3));
        assert_eq!(HfSet::von_neumann(5).cardinality(), 5);
        assert_eq!(HfSet::von_neumann(4).as_von_neumann(), Some(4));
        assert_eq!(HfSet::from_ackermann_index(2).as_von_neumann(), None);
        let x = HfSet::from_ackermann_index(2); // {{{}}}
        let tc = x.transitive_closure();
        assert_eq!(tc, HfSet::from_members([e(), HfSet::singleton(e())]));
        assert_eq!(HfSet::von_neumann(3).transitive_closure(), HfSet::von_neumann(3));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(HfSet::from_ackermann_index(11).to_string(), "#11");
        assert_eq!("{ {}, {{}} }".parse::<HfSet>().unwrap(), HfSet::from_ackermann_index(3));
        assert_eq!("#65535".parse::<HfSet>().unwrap().to_string(), "#65535");
        let big = HfSet::from_ackermann_index(65536);
        assert_eq!(big.to_string(), "{#16}");
        assert_eq!(big.to_string().parse::<HfSet>().unwrap(), big);
        assert!("{#1,".parse::<HfSet>().is_err());
        assert!("#".parse::<HfSet>().is_err());
    }

    #[test]
    fn ackermann_bijection_below_2_16() {
        for n in 0u64..(1 << 16) {
            let x = HfSet::from_ackermann_index(n);
            assert_eq!(x.ackermann_index().unwrap(), BigUint::from(n));
        }
    }

    #[test]
    fn big_index_order_matches_numeric_order() {
        let a = HfSet::von_neumann(5);
        let b = HfSet::from_members([HfSet::von_neumann(4), HfSet::von_neumann(3)]);
        let c = HfSet::from_members([HfSet::von_neumann(4), HfSet::von_neumann(2)]);
        assert_eq!(b.cmp(&c), b.ackermann_index().unwrap().cmp(&c.ackermann_index().unwrap()));
        let (ia, ib) = (a.ackermann_index().unwrap(), b.ackermann_index().unwrap());
        assert_eq!(a.cmp(&b), ia.cmp(&ib));
    }

    fn arb_hf(depth: u32) -> BoxedStrategy<HfSet> {
        let leaf = Just(HfSet::empty()).boxed();
        leaf.prop_recursive(depth, 24, 4, |inner| prop::collection::vec(inner, 0..4).prop_map(HfSet::from_members))
            .boxed()
    }

    proptest! {
        #[test]
        fn members_precede_their_set(x in arb_hf(4)) {
            for m in x.members() {
                prop_assert!(m < &x);
                prop_assert!(m.rank() < x.rank());
                prop_assert!(x.contains(m));
            }
        }

        #[test]
        fn index_round_trip(x in arb_hf(4)) {
            let n = x.ackermann_index().unwrap();
            prop_assert_eq!(HfSet::from_big_index(&n), x);
        }

        #[test]
        fn order_agrees_with_indices(x in arb_hf(4), y in arb_hf(4)) {
            let (a, b) = (x.ackermann_index().unwrap(), y.ackermann_index().unwrap());
            prop_assert_eq!(x.cmp(&y), a.cmp(&b));
            prop_assert_eq!(x == y, a == b);
        }

        #[test]
        fn extensionality(xs in prop::collection::vec(arb_hf(3), 0..6), seed in any::<u64>()) {
            let mut ys = xs.clone();
            ys.extend(xs.iter().take((seed % 4) as usize).cloned());
            ys.reverse();
            prop_assert_eq!(HfSet::from_members(xs), HfSet::from_members(ys));
        }
    }
}
