mod common;

use proptest::prelude::*;

use hf_frege::model::{eval, eval_core, Env, Universe};
use hf_frege::syntax::{code_formula, decode_formula, enumerate, index_of, normalize, parse};

use common::{any_formula, presentation_formula};

fn v3() -> Universe {
    Universe::v_stage(3, false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse(f in any_formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn normalization_preserves_truth(f in presentation_formula()) {
        let u = v3();
        let core = normalize(&f, "x", "p").unwrap();
        for x in u.elements() {
            for p in u.elements() {
                let env = Env::from([("x".to_string(), x.clone()), ("p".to_string(), p.clone())]);
                prop_assert_eq!(eval(&u, &f, &env).unwrap(), eval_core(&u, &core, x, p), "x={}, p={}", x, p);
            }
        }
    }

    #[test]
    fn normal_forms_are_enumerated(f in presentation_formula()) {
        let core = normalize(&f, "x", "p").unwrap();
        let n = index_of(&core).unwrap();
        prop_assert_eq!(enumerate(&n), core);
    }

    #[test]
    fn codes_decode(f in presentation_formula()) {
        let core = normalize(&f, "x", "p").unwrap();
        prop_assert_eq!(decode_formula(&code_formula(&core)).unwrap(), core);
    }

    #[test]
    fn codes_are_injective(f in presentation_formula(), g in presentation_formula()) {
        let (a, b) = (normalize(&f, "x", "p").unwrap(), normalize(&g, "x", "p").unwrap());
        prop_assert_eq!(a == b, code_formula(&a) == code_formula(&b));
    }
}
