use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::search::ScanTable;

/// Largest universe any constructor will build.
pub const MAX_UNIVERSE: usize = 1 << 20;

/// How a universe was built; also its name in output and error messages.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UniverseLabel {
    VStage(u32),
    AckermannSegment(usize),
    ClosureOf(Vec<HfSet>),
}

impl fmt::Display for UniverseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseLabel::VStage(r) => write!(f, "v{r}"),
            UniverseLabel::AckermannSegment(n) => write!(f, "ack:{n}"),
            UniverseLabel::ClosureOf(seeds) => {
                f.write_str("closure:")?;
                for (i, s) in seeds.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite transitive set of HF sets, the domain of quantification.
pub struct Universe {
    elements: Vec<HfSet>,
    positions: HashMap<HfSet, usize>,
    /// Member positions of each element, ascending.
    members: Vec<Vec<u32>>,
    label: UniverseLabel,
    name: String,
    pub(crate) scan: Mutex<ScanTable>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe({}, {} elements)", self.label, self.elements.len())
    }
}

impl Universe {
    fn build(mut elements: Vec<HfSet>, label: UniverseLabel) -> Result<Universe> {
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::InvalidUniverse("a universe needs at least one element".into()));
        }
        let positions: HashMap<HfSet, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut members = Vec::with_capacity(elements.len());
        for e in &elements {
            let mut ms = Vec::with_capacity(e.cardinality());
            for m in e.members() {
                let pos = positions
                    .get(m)
                    .ok_or_else(|| Error::InvalidUniverse(format!("{e} has member {m} outside the universe")))?;
                ms.push(*pos as u32);
            }
            members.push(ms);
        }
        let name = label.to_string();
        Ok(Universe { elements, positions, members, label, name, scan: Mutex::new(ScanTable::default()) })
    }

    /// The stage V_r: every set of rank below `r`. Stage 5 (65536 elements)
    /// is only built with `allow_v5`.
    pub fn v_stage(r: u32, allow_v5: bool) -> Result<Universe> {
        match r {
            0 => return Err(Error::InvalidUniverse("V_0 is empty".into())),
            1..=4 => {}
            5 if allow_v5 => {}
            _ => return Err(Error::StageTooLarge(r)),
        }
        // |V_r| is a tower of twos, and V_r is exactly the Ackermann segment of that length.
        let size = (1..r).fold(1usize, |acc, _| 1 << acc);
        let mut u = Universe::ackermann_segment(size)?;
        u.label = UniverseLabel::VStage(r);
        u.name = u.label.to_string();
        Ok(u)
    }

    /// `{from_ackermann_index(k) : k < n}`.
    pub fn ackermann_segment(n: usize) -> Result<Universe> {
        if n == 0 {
            return Err(Error::InvalidUniverse("ack:0 is empty".into()));
        }
        if n > MAX_UNIVERSE {
            return Err(Error::SegmentTooLarge { size: n, max: MAX_UNIVERSE });
        }
        let elements = (0..n as u64).map(HfSet::from_ackermann_index).collect();
        Universe::build(elements, UniverseLabel::AckermannSegment(n))
    }

    /// The seeds, all their hereditary members, and ∅.
    pub fn closure_of(seeds: &[HfSet]) -> Result<Universe> {
        let mut seen: HashSet<HfSet> = HashSet::new();
        seen.insert(HfSet::empty());
        let mut stack: Vec<HfSet> = seeds.to_vec();
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                if seen.len() > MAX_UNIVERSE {
                    return Err(Error::SegmentTooLarge { size: seen.len(), max: MAX_UNIVERSE });
                }
                stack.extend(x.members().iter().cloned());
            }
        }
        let mut label_seeds = seeds.to_vec();
        label_seeds.sort();
        label_seeds.dedup();
        Universe::build(seen.into_iter().collect(), UniverseLabel::ClosureOf(label_seeds))
    }

    /// Parses `v2`, `v3`, `v4`, `v5!`, `ack:N` or `closure:#a,#b,...`.
    pub fn from_descriptor(desc: &str) -> Result<Universe> {
        let desc = desc.trim();
        let bad = || Error::InvalidUniverse(format!("unrecognized universe descriptor `{desc}`"));
        if let Some(rest) = desc.strip_prefix("ack:") {
            return Universe::ackermann_segment(rest.trim().parse().map_err(|_| bad())?);
        }
        if let Some(rest) = desc.strip_prefix("closure:") {
            let seeds = split_literals(rest)
                .into_iter()
                .map(|s| s.parse::<HfSet>().map_err(|e| Error::InvalidUniverse(format!("seed `{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return Universe::closure_of(&seeds);
        }
        if let Some(rest) = desc.strip_prefix('v') {
            let (digits, allow) = match rest.strip_suffix('!') {
                Some(d) => (d, true),
                None => (rest, false),
            };
            return Universe::v_stage(digits.parse().map_err(|_| bad())?, allow);
        }
        Err(bad())
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, pos: usize) -> &HfSet {
        &self.elements[pos]
    }

    pub fn position(&self, x: &HfSet) -> Option<usize> {
        self.positions.get(x).copied()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.positions.contains_key(x)
    }

    /// Positions of the members of the element at `pos`.
    pub fn members_of(&self, pos: usize) -> &[u32] {
        &self.members[pos]
    }

    /// Whether element `member` belongs to element `container`.
    pub fn has_member(&self, container: usize, member: usize) -> bool {
        self.members[container].binary_search(&(member as u32)).is_ok()
    }

    pub fn label(&self) -> &UniverseLabel {
        &self.label
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `Some(r)` when this universe is the stage V_r.
    pub fn v_stage_rank(&self) -> Option<u32> {
        match self.label {
            UniverseLabel::VStage(r) => Some(r),
            _ => None,
        }
    }

    /// Direct scan: every member of every element is an element.
    pub fn is_transitive(&self) -> bool {
        self.elements.iter().all(|e| e.members().iter().all(|m| self.contains(m)))
    }
}

/// Splits a comma-separated list of literals, respecting braces.
fn split_literals(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in src.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(src[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = src[start..].trim();
    if !last.is_empty() {
        out.push(last);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_sizes() {
        let sizes: Vec<usize> = (1..=4).map(|r| Universe::v_stage(r, false).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 16]);
        assert_eq!(Universe::v_stage(5, false).unwrap_err(), Error::StageTooLarge(5));
        assert_eq!(Universe::v_stage(6, true).unwrap_err(), Error::StageTooLarge(6));
        let v2 = Universe::v_stage(2, false).unwrap();
        assert_eq!(v2.elements(), &[HfSet::empty(), HfSet::singleton(HfSet::empty())]);
    }

    #[test]
    fn stage_members_have_bounded_rank() {
        let v4 = Universe::v_stage(4, false).unwrap();
        assert!(v4.elements().iter().all(|e| e.rank() < 4));
        assert_eq!(v4.elements().iter().filter(|e| e.rank() == 3).count(), 12);
    }

    #[test]
    fn segments_are_transitive() {
        let full = Universe::ackermann_segment(1024).unwrap();
        assert!(full.is_transitive());
        // ack:n is the first n elements of ack:1024; it is transitive iff no
        // member of those elements sits at position n or later.
        for n in 1..=1024 {
            let closed = (0..n).all(|k| full.element(k).members().iter().all(|m| full.position(m).unwrap() < n));
            assert!(closed, "ack:{n}");
        }
        for n in [1, 2, 3, 5, 8, 13, 100] {
            assert!(Universe::ackermann_segment(n).unwrap().is_transitive(), "ack:{n}");
        }
        assert!(Universe::ackermann_segment(0).is_err());
        assert!(matches!(Universe::ackermann_segment(MAX_UNIVERSE + 1), Err(Error::SegmentTooLarge { .. })));
    }

    #[test]
    fn closures() {
        let u = Universe::closure_of(&[HfSet::singleton(HfSet::empty())]).unwrap();
        assert_eq!(u.len(), 2);
        let u = Universe::closure_of(&[HfSet::von_neumann(3)]).unwrap();
        assert_eq!(u.elements(), &(0..4).map(HfSet::von_neumann).collect::<Vec<_>>()[..]);
        let u = Universe::closure_of(&[]).unwrap();
        assert_eq!(u.elements(), &[HfSet::empty()]);
    }

    #[test]
    fn descriptors() {
        assert_eq!(Universe::from_descriptor("v3").unwrap().len(), 4);
        assert_eq!(Universe::from_descriptor("ack:8").unwrap().name(), "ack:8");
        let c = Universe::from_descriptor("closure:#5,#11").unwrap();
        assert_eq!(c.name(), "closure:#5,#11");
        assert!(c.contains(&HfSet::from_ackermann_index(5)));
        assert!(c.is_transitive());
        let c = Universe::from_descriptor("closure:{{}, {{}}}, #2").unwrap();
        assert_eq!(c.len(), 4);
        assert!(Universe::from_descriptor("v5").is_err());
        assert!(Universe::from_descriptor("w3").is_err());
        assert!(Universe::from_descriptor("ack:x").is_err());
    }

    #[test]
    fn membership_table_matches_sets() {
        let u = Universe::v_stage(4, false).unwrap();
        for i in 0..u.len() {
            for j in 0..u.len() {
                assert_eq!(u.has_member(j, i), u.element(j).contains(u.element(i)));
            }
        }
    }
}
