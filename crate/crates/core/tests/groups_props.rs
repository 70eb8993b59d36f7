use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shtuka_core::groups::{conjugation_orbits, enumerate_homs, evaluate_word, mapping_torus, Word};
use shtuka_core::shtuka::random_scenario;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_stabilizer_on_every_enumeration(seed in any::<u64>()) {
        let s = random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), 0).unwrap();
        let homs = enumerate_homs(&s.presentation, &s.group).unwrap();
        let orbits = conjugation_orbits(&homs, &s.group);
        let total: usize = orbits.orbits.iter().map(|o| s.group.order() / o.stabilizer.len()).sum();
        prop_assert_eq!(total, homs.len());
    }

    #[test]
    fn evaluation_is_a_monoid_map(seed in any::<u64>(), w1 in prop::collection::vec((0usize..2, -2i8..=2), 0..5), w2 in prop::collection::vec((0usize..2, -2i8..=2), 0..5)) {
        let s = random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), 0).unwrap();
        let rank = s.presentation.rank();
        prop_assume!(rank > 0);
        let word = |w: &[(usize, i8)]| Word { letters: w.iter().filter(|(_, e)| *e != 0).map(|&(g, e)| (g % rank, e)).collect() };
        let (a, b) = (word(&w1), word(&w2));
        let homs = enumerate_homs(&s.presentation, &s.group).unwrap();
        for h in homs.iter().take(8) {
            let ab = evaluate_word(&a.concat(&b), &h.images, &s.group).unwrap();
            let prod = s.group.mul(evaluate_word(&a, &h.images, &s.group).unwrap(), evaluate_word(&b, &h.images, &s.group).unwrap());
            prop_assert_eq!(ab, prod);
            prop_assert_eq!(evaluate_word(&Word::empty(), &h.images, &s.group).unwrap(), s.group.identity());
        }
    }

    #[test]
    fn torus_homs_satisfy_the_twisted_relation(seed in any::<u64>()) {
        let s = random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), 0).unwrap();
        let torus = mapping_torus(&s.presentation, &s.phi);
        let g = &s.group;
        let source = enumerate_homs(&s.presentation, g).unwrap();
        for h in enumerate_homs(&torus, g).unwrap() {
            let (rho, t) = h.images.split_at(s.presentation.rank());
            prop_assert!(source.iter().any(|x| x.images == rho));
            for (x, img) in s.phi.images.iter().enumerate() {
                let lhs = evaluate_word(img, rho, g).unwrap();
                prop_assert_eq!(lhs, g.conj(t[0], rho[x]));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic(seed in any::<u64>()) {
        let s = random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), 0).unwrap();
        prop_assert_eq!(enumerate_homs(&s.presentation, &s.group).unwrap(), enumerate_homs(&s.presentation, &s.group).unwrap());
    }
}
