use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shtuka_core::excursion::{evaluate_excursion, words_up_to, xi_star, ExcursionDatum, XiDatum};
use shtuka_core::groups::Word;
use shtuka_core::shtuka::{random_xi, Scenario, CORE_SCENARIOS};

fn loops(rng_pick: &[usize], rank: usize, k: usize) -> Vec<Word> {
    let words = words_up_to(rank, 2);
    (0..k).map(|i| words[rng_pick[i % rng_pick.len()] % words.len()].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn values_are_orbit_constant_and_multiplicative(b in 0usize..3, seed in any::<u64>(), picks in prop::collection::vec(0usize..64, 1..4), k in 1usize..=2) {
        let s = Scenario::builtin(CORE_SCENARIOS[b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ls = loops(&picks, s.fixed().torus().rank(), k);
        let (x1, x2) = (random_xi(&mut rng, &s, k).unwrap(), random_xi(&mut rng, &s, k).unwrap());
        let d1 = ExcursionDatum::new(x1.clone(), ls.clone()).unwrap();
        let f1 = evaluate_excursion(&d1, s.fixed()).unwrap();
        for (o, orbit) in s.fixed().orbits().orbits.iter().enumerate() {
            for &m in &orbit.members {
                prop_assert_eq!(&d1.value_at(s.fixed().object(m)).unwrap(), &f1.values[o]);
            }
        }
        let f2 = evaluate_excursion(&ExcursionDatum::new(x2.clone(), ls.clone()).unwrap(), s.fixed()).unwrap();
        let f12 = evaluate_excursion(&ExcursionDatum::new(xi_star(&x1, &x2).unwrap(), ls).unwrap(), s.fixed()).unwrap();
        prop_assert_eq!(f12, f1.mul(&f2));
    }

    #[test]
    fn simultaneous_conjugation_is_invisible(b in 0usize..3, seed in any::<u64>(), picks in prop::collection::vec(0usize..64, 1..4), delta in 0usize..64, k in 1usize..=2) {
        let s = Scenario::builtin(CORE_SCENARIOS[b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = s.fixed().torus().rank();
        let ls = loops(&picks, rank, k);
        let d = loops(&[delta], rank, 1).remove(0);
        let xi = random_xi(&mut rng, &s, k).unwrap();
        let conj: Vec<Word> = ls.iter().map(|w| d.concat(w).concat(&d.inverse())).collect();
        let f = evaluate_excursion(&ExcursionDatum::new(xi.clone(), ls).unwrap(), s.fixed()).unwrap();
        let g = evaluate_excursion(&ExcursionDatum::new(xi, conj).unwrap(), s.fixed()).unwrap();
        prop_assert_eq!(f, g);
    }

    /// Two slots `(a, a')` with equal loops give the same function as one slot `a ⊗ a'`.
    #[test]
    fn collapsing_slots_with_equal_loops(b in 0usize..3, seed in any::<u64>(), pick in 0usize..64) {
        let s = Scenario::builtin(CORE_SCENARIOS[b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = random_xi(&mut rng, &s, 2).unwrap();
        let w = loops(&[pick], s.fixed().torus().rank(), 1).remove(0);
        let merged_rep = xi.reps()[0].tensor(&xi.reps()[1]).unwrap();
        let merged = XiDatum::new(&s.group, &s.ctx, vec![merged_rep], xi.v().to_vec(), xi.vstar().to_vec()).unwrap();
        let f = evaluate_excursion(&ExcursionDatum::new(xi, vec![w.clone(), w.clone()]).unwrap(), s.fixed()).unwrap();
        let g = evaluate_excursion(&ExcursionDatum::new(merged, vec![w]).unwrap(), s.fixed()).unwrap();
        prop_assert_eq!(f, g);
    }
}
