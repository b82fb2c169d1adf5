mod common;

use proptest::prelude::*;

use hf_frege::abstraction::{abstraction_of_class, extension_of, is_extension, ClassEquivalence, Presentation};
use hf_frege::bitset::BitSet;
use hf_frege::model::{first_equivalent_search, surface_extension, ClassExtension, Env, Universe, DEFAULT_BUDGET};
use hf_frege::syntax::{enumerate_u64, index_of_u64, normalize, parse};
use hf_frege::{Error, HfSet};

use common::presentation_formula;

fn v3() -> Universe {
    Universe::v_stage(3, false).unwrap()
}

fn env_p(p: &HfSet) -> Env {
    Env::from([("p".to_string(), p.clone())])
}

/// Extension of ψ_n at `p`, computed through the surface evaluator.
fn extension_at(u: &Universe, n: u64, p: &HfSet) -> BitSet {
    surface_extension(u, &enumerate_u64(n).to_surface("x", "p"), "x", &env_p(p)).unwrap()
}

fn related(equiv: &ClassEquivalence, a: &BitSet, b: &BitSet) -> bool {
    match equiv {
        ClassEquivalence::Extensional => a == b,
        ClassEquivalence::Equinumerous => a.count_ones() == b.count_ones(),
        _ => unreachable!(),
    }
}

#[test]
fn searches_are_minimal_and_collect_every_minimal_parameter() {
    let u = v3();
    for equiv in [ClassEquivalence::Extensional, ClassEquivalence::Equinumerous] {
        for mask in 0usize..16 {
            let target = BitSet::from_positions(4, (0..4).filter(|i| mask >> i & 1 == 1));
            let r =
                first_equivalent_search(&u, &ClassExtension::new(&u, target.clone()), &equiv, DEFAULT_BUDGET).unwrap();
            for m in 0..r.index {
                for p in u.elements() {
                    assert!(!related(&equiv, &extension_at(&u, m, p), &target), "{equiv:?} {mask}: ψ_{m} works");
                }
            }
            let working: Vec<&HfSet> =
                u.elements().iter().filter(|p| related(&equiv, &extension_at(&u, r.index, p), &target)).collect();
            let min = working.iter().map(|p| p.rank()).min().unwrap();
            let expected: Vec<HfSet> = working.into_iter().filter(|p| p.rank() == min).cloned().collect();
            assert_eq!(r.params, expected, "{equiv:?} {mask}");
        }
    }
}

#[test]
fn objects_refuse_cross_universe_comparison() {
    let p = Presentation::parse("x = x", Env::new()).unwrap();
    let a = extension_of(&Universe::v_stage(2, false).unwrap(), &p, DEFAULT_BUDGET).unwrap();
    let b = extension_of(&v3(), &p, DEFAULT_BUDGET).unwrap();
    assert!(matches!(a.same_as(&b), Err(Error::CrossUniverse { .. })));
}

#[test]
fn results_do_not_depend_on_cached_state() {
    let warm = v3();
    for n in 0..40 {
        let p = Presentation::new(enumerate_u64(n).to_surface("x", "p"), env_p(&HfSet::from_ackermann_index(n % 4)));
        let a = extension_of(&warm, &p, DEFAULT_BUDGET).unwrap();
        let b = extension_of(&v3(), &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.as_hfset(), b.as_hfset());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn the_presented_formula_bounds_the_search(f in presentation_formula(), p in 0u64..4) {
        let u = v3();
        let n = index_of_u64(&normalize(&f, "x", "p").unwrap()).unwrap();
        prop_assume!(n.is_some_and(|n| n <= 1 << 20));
        let n = n.unwrap();
        let obj = extension_of(&u, &Presentation::new(f, env_p(&HfSet::from_ackermann_index(p))), n).unwrap();
        prop_assert!(obj.index <= n);
    }

    #[test]
    fn extension_objects_decode_to_their_class(f in presentation_formula(), p in 0u64..4) {
        let u = v3();
        let pres = Presentation::new(f, env_p(&HfSet::from_ackermann_index(p)));
        let obj = extension_of(&u, &pres, DEFAULT_BUDGET).unwrap();
        let decoded = is_extension(&u, obj.as_hfset(), DEFAULT_BUDGET).expect("recognized");
        prop_assert_eq!(decoded.extension, pres.extension(&u).unwrap());
        prop_assert_eq!(decoded.index, obj.index);
        prop_assert_eq!(decoded.params, obj.params);
    }

    #[test]
    fn objects_depend_on_the_class_only(f in presentation_formula(), p in 0u64..4) {
        // Re-present the same class as membership in the set of its members.
        let u = v3();
        let pres = Presentation::new(f, env_p(&HfSet::from_ackermann_index(p)));
        let class = pres.extension(&u).unwrap();
        let members = HfSet::from_members(class.members(&u));
        let other = Presentation::new(parse("x in $p").unwrap(), env_p(&members));
        prop_assert_eq!(other.extension(&u).unwrap(), class.clone());
        let a = extension_of(&u, &pres, DEFAULT_BUDGET).unwrap();
        let b = extension_of(&u, &other, DEFAULT_BUDGET).unwrap();
        prop_assert!(a.same_as(&b).unwrap());
        let c = abstraction_of_class(&u, &class, &ClassEquivalence::Extensional, DEFAULT_BUDGET).unwrap();
        prop_assert!(a.same_as(&c).unwrap());
    }

    #[test]
    fn basic_law_v_on_random_pairs(f in presentation_formula(), g in presentation_formula(), p in 0u64..4, q in 0u64..4) {
        let u = v3();
        let a = Presentation::new(f, env_p(&HfSet::from_ackermann_index(p)));
        let b = Presentation::new(g, env_p(&HfSet::from_ackermann_index(q)));
        let same_class = a.extension(&u).unwrap() == b.extension(&u).unwrap();
        let ea = extension_of(&u, &a, DEFAULT_BUDGET).unwrap();
        let eb = extension_of(&u, &b, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(ea.same_as(&eb).unwrap(), same_class);
    }
}
