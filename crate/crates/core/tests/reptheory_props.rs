use proptest::prelude::*;

use shtuka_core::exactfield::CycNumber;
use shtuka_core::reptheory::{inner_product, Representation, RepKind};
use shtuka_core::shtuka::{builtin_names, Scenario};

fn pick(s: &Scenario, idx: &[usize]) -> Vec<Representation> {
    idx.iter().map(|i| s.reps[i % s.reps.len()].1.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn invariant_dimension_matches_characters(b in 0usize..5, idx in prop::collection::vec(0usize..8, 1..3), dualize in any::<bool>()) {
        let s = Scenario::builtin(builtin_names()[b]).unwrap();
        let reps = pick(&s, &idx);
        let mut v = reps.iter().skip(1).fold(reps[0].clone(), |acc, r| acc.tensor(r).unwrap());
        if dualize {
            v = v.dual();
        }
        v.verify().unwrap();
        let one = Representation::builtin(&s.group, &s.ctx, RepKind::Trivial).unwrap().character();
        let expected = inner_product(&v.character(), &one).unwrap();
        prop_assert_eq!(CycNumber::from_int(&s.ctx, v.invariant_basis().unwrap().len() as i64), expected);
    }

    #[test]
    fn characters_of_tensors_and_duals(b in 0usize..5, i in 0usize..8, j in 0usize..8) {
        let s = Scenario::builtin(builtin_names()[b]).unwrap();
        let (x, y) = (&s.reps[i % s.reps.len()].1, &s.reps[j % s.reps.len()].1);
        prop_assert_eq!(x.tensor(y).unwrap().character(), x.character().mul(&y.character()).unwrap());
        prop_assert_eq!(x.dual().character(), x.character().conj());
        prop_assert_eq!(x.direct_sum(y).unwrap().character(), x.character().add(&y.character()).unwrap());
    }

    #[test]
    fn averaging_projector_is_an_invariant_idempotent(b in 0usize..5, idx in prop::collection::vec(0usize..8, 1..3)) {
        let s = Scenario::builtin(builtin_names()[b]).unwrap();
        let reps = pick(&s, &idx);
        let v = reps.iter().skip(1).fold(reps[0].clone(), |acc, r| acc.tensor(r).unwrap());
        let p = v.averaging_projector().unwrap();
        prop_assert_eq!(p.mat_mul(&p).unwrap(), p.clone());
        for g in 0..s.group.order() {
            prop_assert_eq!(v.matrix(g).mat_mul(&p).unwrap(), p.clone());
        }
    }
}

#[test]
fn regular_and_permutation_reps_are_homomorphisms() {
    for name in builtin_names() {
        let s = Scenario::builtin(name).unwrap();
        for kind in [RepKind::Trivial, RepKind::Permutation, RepKind::Regular] {
            let r = Representation::builtin(&s.group, &s.ctx, kind).unwrap();
            r.verify().unwrap();
            // regular character: |G| at the identity, zero elsewhere
            if kind == RepKind::Regular {
                let ch = r.character();
                for g in 0..s.group.order() {
                    let expect = if g == s.group.identity() { s.group.order() as i64 } else { 0 };
                    assert_eq!(ch.at(g), &CycNumber::from_int(&s.ctx, expect));
                }
            }
        }
    }
}
