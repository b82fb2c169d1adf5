use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hfset::HfSet;
use crate::model::{compile_surface, Env, Point, Universe};
use crate::syntax::{parse, Formula};

/// Black-box decision procedure for a relation on sets.
pub type Relater = Arc<dyn Fn(&HfSet, &HfSet) -> bool + Send + Sync>;

/// A binary relation on sets, to be checked for being an equivalence.
#[derive(Clone)]
pub enum SetRelation {
    /// `formula` with free variables `left` and `right`; other free names come from `env`.
    Formula {
        formula: Formula,
        left: String,
        right: String,
        env: Env,
    },
    External {
        name: String,
        relate: Relater,
    },
}

impl fmt::Debug for SetRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRelation::Formula { formula, left, right, .. } => write!(f, "{left} ~ {right} :<-> {formula}"),
            SetRelation::External { name, .. } => write!(f, "external:{name}"),
        }
    }
}

impl SetRelation {
    /// A formula in the variables `a` and `b`.
    pub fn formula(src: &str) -> Result<SetRelation> {
        Ok(SetRelation::Formula { formula: parse(src)?, left: "a".into(), right: "b".into(), env: Env::new() })
    }

    pub fn external<F>(name: &str, relate: F) -> SetRelation
    where
        F: Fn(&HfSet, &HfSet) -> bool + Send + Sync + 'static,
    {
        SetRelation::External { name: name.to_string(), relate: Arc::new(relate) }
    }

    /// The full relation matrix over the universe.
    fn matrix(&self, u: &Universe) -> Result<Vec<Vec<bool>>> {
        let n = u.len();
        let mut m = vec![vec![false; n]; n];
        match self {
            SetRelation::Formula { formula, left, right, env } => {
                let mut env = env.clone();
                env.remove(left);
                env.remove(right);
                let c = compile_surface(u, formula, &env, &[left, right])?;
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell = c.eval(u, &[Point::Elem(i as u32), Point::Elem(j as u32)]);
                    }
                }
            }
            SetRelation::External { relate, .. } => {
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell = relate(u.element(i), u.element(j));
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Scott's trick over a universe: each element is sent to the set of
/// rank-minimal members of its equivalence class.
#[derive(Debug)]
pub struct ScottAbstraction<'u> {
    u: &'u Universe,
    /// Class representative (least position) of each element.
    class_of: Vec<usize>,
    /// Abstraction object of each class, keyed by representative.
    objects: Vec<Option<HfSet>>,
}

impl<'u> ScottAbstraction<'u> {
    /// Validates the relation exhaustively over `u` and precomputes all objects.
    #[allow(clippy::needless_range_loop)]
    pub fn new(u: &'u Universe, relation: &SetRelation) -> Result<ScottAbstraction<'u>> {
        let m = relation.matrix(u)?;
        let n = u.len();
        let name = |i: usize| u.element(i).to_string();
        for i in 0..n {
            if !m[i][i] {
                return Err(Error::NotEquivalence { property: "reflexivity".into(), witness: name(i) });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::NotEquivalence {
                        property: "symmetry".into(),
                        witness: format!("{}, {}", name(i), name(j)),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !m[i][j] {
                    continue;
                }
                for k in 0..n {
                    if m[j][k] && !m[i][k] {
                        return Err(Error::NotEquivalence {
                            property: "transitivity".into(),
                            witness: format!("{}, {}, {}", name(i), name(j), name(k)),
                        });
                    }
                }
            }
        }
        let class_of: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| m[i][j]).expect("reflexive")).collect();
        let mut objects = vec![None; n];
        for rep in 0..n {
            if class_of[rep] != rep {
                continue;
            }
            let class: Vec<&HfSet> = (0..n).filter(|&j| class_of[j] == rep).map(|j| u.element(j)).collect();
            let min = class.iter().map(|s| s.rank()).min().expect("nonempty class");
            objects[rep] = Some(HfSet::from_members(class.into_iter().filter(|s| s.rank() == min).cloned()));
        }
        Ok(ScottAbstraction { u, class_of, objects })
    }

    pub fn abstract_of(&self, x: &HfSet) -> Result<HfSet> {
        let pos = self.u.position(x).ok_or_else(|| Error::ElementNotInUniverse(x.to_string()))?;
        Ok(self.objects[self.class_of[pos]].clone().expect("representative has an object"))
    }

    /// Number of equivalence classes.
    pub fn class_count(&self) -> usize {
        self.objects.iter().filter(|o| o.is_some()).count()
    }
}

/// αx for a single element; see [`ScottAbstraction`] for repeated use.
pub fn scott_abstraction(u: &Universe, relation: &SetRelation, x: &HfSet) -> Result<HfSet> {
    ScottAbstraction::new(u, relation)?.abstract_of(x)
}

/// Largest cardinality for which [`scott_cardinal`] builds the answer.
pub const MAX_SCOTT_CARDINALITY: usize = 16;

/// Least `m` such that V_m has at least `k` elements, which is the least
/// rank of a `k`-element set.
pub fn minimal_stage(k: usize) -> u32 {
    let mut m = 0u32;
    let mut size: usize = 0;
    while size < k {
        size = if size == 0 { 1 } else { 1usize.checked_shl(size as u32).unwrap_or(usize::MAX) };
        m += 1;
    }
    m
}

/// #x by Scott's trick: every set of minimal rank with the same number of members as `x`.
pub fn scott_cardinal(x: &HfSet) -> Result<HfSet> {
    let k = x.cardinality();
    let m = minimal_stage(k);
    if k > MAX_SCOTT_CARDINALITY {
        return Err(Error::CardinalTooLarge { stage: m, cardinality: k });
    }
    let stage = Universe::v_stage(m.max(1), false)?;
    let mut out = Vec::new();
    choose(stage.elements(), k, 0, &mut Vec::new(), &mut out);
    Ok(HfSet::from_members(out))
}

/// A Scott cardinal, or for sets past [`MAX_SCOTT_CARDINALITY`] the pair
/// (stage, cardinality) that determines it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Built(HfSet),
    Symbolic { stage: u32, cardinality: usize },
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Built(s) => write!(f, "{s}"),
            Cardinal::Symbolic { stage, cardinality } => {
                write!(f, "the {cardinality}-element subsets of V_{stage}")
            }
        }
    }
}

/// [`scott_cardinal`], falling back to [`Cardinal::Symbolic`] above the cap.
/// Two sets get equal results exactly when they have the same cardinality.
pub fn cardinal_of(x: &HfSet) -> Result<Cardinal> {
    match scott_cardinal(x) {
        Ok(c) => Ok(Cardinal::Built(c)),
        Err(Error::CardinalTooLarge { stage, cardinality }) => Ok(Cardinal::Symbolic { stage, cardinality }),
        Err(e) => Err(e),
    }
}

fn choose(items: &[HfSet], k: usize, start: usize, cur: &mut Vec<HfSet>, out: &mut Vec<HfSet>) {
    if cur.len() == k {
        out.push(HfSet::from_members(cur.iter().cloned()));
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i].clone());
        choose(items, k, i + 1, cur, out);
        cur.pop();
    }
}
