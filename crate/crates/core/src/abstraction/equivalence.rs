use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{eval, Env, Universe};
use crate::syntax::{parse, Formula};

/// Names under which a first-order class equivalence sees its two classes.
pub const LEFT_CLASS: &str = "F";
pub const RIGHT_CLASS: &str = "G";

/// Black-box decision procedure on pairs of classes of a universe.
pub type Comparator = Arc<dyn Fn(&Universe, &BitSet, &BitSet) -> bool + Send + Sync>;

/// A notion of sameness between classes of a universe.
#[derive(Clone)]
pub enum ClassEquivalence {
    Extensional,
    /// Same number of elements.
    Equinumerous,
    /// A formula in which the classes appear as the sets `$F` and `$G`, so
    /// `x in $F` reads "x falls under F". Other free names come from `env`.
    FirstOrder {
        formula: Formula,
        env: Env,
    },
    /// `name` identifies the comparator in output and must be unique per behavior.
    External {
        name: String,
        compare: Comparator,
    },
}

impl fmt::Debug for ClassEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl ClassEquivalence {
    pub fn first_order(src: &str) -> Result<ClassEquivalence> {
        Ok(ClassEquivalence::FirstOrder { formula: parse(src)?, env: Env::new() })
    }

    pub fn external<F>(name: &str, compare: F) -> ClassEquivalence
    where
        F: Fn(&Universe, &BitSet, &BitSet) -> bool + Send + Sync + 'static,
    {
        ClassEquivalence::External { name: name.to_string(), compare: Arc::new(compare) }
    }

    /// Short human-readable name, used as the kind of abstraction objects.
    pub fn descriptor(&self) -> String {
        match self {
            ClassEquivalence::Extensional => "extensional".into(),
            ClassEquivalence::Equinumerous => "equinumerous".into(),
            ClassEquivalence::FirstOrder { formula, env } if env.is_empty() => format!("fo:{formula}"),
            ClassEquivalence::FirstOrder { formula, env } => {
                let binds: Vec<String> = env.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("fo:{formula} [{}]", binds.join(", "))
            }
            ClassEquivalence::External { name, .. } => format!("external:{name}"),
        }
    }

    /// Whether the relation must be checked to be an equivalence before use.
    pub fn needs_validation(&self) -> bool {
        matches!(self, ClassEquivalence::FirstOrder { .. } | ClassEquivalence::External { .. })
    }

    /// Search results may be memoized under this key. External comparators
    /// are opaque and never memoized.
    pub(crate) fn cache_key(&self) -> Option<String> {
        match self {
            ClassEquivalence::External { .. } => None,
            other => Some(other.descriptor()),
        }
    }

    pub fn related(&self, u: &Universe, a: &BitSet, b: &BitSet) -> Result<bool> {
        match self {
            ClassEquivalence::Extensional => Ok(a == b),
            ClassEquivalence::Equinumerous => Ok(a.count_ones() == b.count_ones()),
            ClassEquivalence::FirstOrder { formula, env } => {
                let as_set = |bits: &BitSet| HfSet::from_members(bits.ones().map(|i| u.element(i).clone()));
                let mut env = env.clone();
                env.insert(LEFT_CLASS.into(), as_set(a));
                env.insert(RIGHT_CLASS.into(), as_set(b));
                eval(u, formula, &env)
            }
            ClassEquivalence::External { compare, .. } => {
                if a.len() != u.len() || b.len() != u.len() {
                    return Err(Error::Invariant("class bitset length differs from universe size".into()));
                }
                Ok(compare(u, a, b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_relation_reads_classes_as_sets() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let eq = ClassEquivalence::first_order("all x ((all y not y in x) -> (x in $F <-> x in $G))").unwrap();
        let with_empty = BitSet::from_positions(4, [0, 2]);
        let also_empty = BitSet::from_positions(4, [0]);
        let without = BitSet::from_positions(4, [1, 2, 3]);
        assert!(eq.related(&v3, &with_empty, &also_empty).unwrap());
        assert!(!eq.related(&v3, &with_empty, &without).unwrap());
        assert!(eq.needs_validation());
        assert!(eq.descriptor().starts_with("fo:"));
    }

    #[test]
    fn builtin_relations() {
        let v3 = Universe::v_stage(3, false).unwrap();
        let a = BitSet::from_positions(4, [0, 1]);
        let b = BitSet::from_positions(4, [2, 3]);
        assert!(!ClassEquivalence::Extensional.related(&v3, &a, &b).unwrap());
        assert!(ClassEquivalence::Equinumerous.related(&v3, &a, &b).unwrap());
        let ext = ClassEquivalence::external("parity", |_, a, b| a.count_ones() % 2 == b.count_ones() % 2);
        assert!(ext.related(&v3, &a, &b).unwrap());
        assert_eq!(ext.descriptor(), "external:parity");
        assert!(ext.cache_key().is_none());
    }
}
