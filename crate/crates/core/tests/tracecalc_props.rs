use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shtuka_core::exactfield::{make_context, unit_vector, vec_add, CycNumber, Vector};
use shtuka_core::shtuka::{builtin_names, random_scenario, HeckeBimodule, Scenario, DENSE_ALGEBRA_LIMIT};
use shtuka_core::tracecalc::{
    cyclicity_iso, group_algebra, hattori_stallings, hh0, random_bimodule, Bimodule, FinDimAlgebra,
    ProjectiveModuleData, SmallAlgebra,
};

fn twisted_hh_dim(s: &Scenario) -> usize {
    let q = HeckeBimodule::new(s.char_groupoid(), &s.ctx, Vec::new(), s.frobenius_map().to_vec()).unwrap();
    hh0(&q.to_dense(s.algebra()).unwrap()).unwrap().dim()
}

#[test]
fn twisted_hh0_counts_fixed_orbits_on_builtins() {
    for name in builtin_names() {
        let s = Scenario::builtin(name).unwrap();
        if s.algebra_dim() <= DENSE_ALGEBRA_LIMIT {
            assert_eq!(twisted_hh_dim(&s), s.fixed().orbit_count(), "{name}");
        }
    }
}

#[test]
fn groupoid_algebras_are_semisimple() {
    for name in builtin_names() {
        let s = Scenario::builtin(name).unwrap();
        if s.algebra_dim() <= DENSE_ALGEBRA_LIMIT {
            s.algebra().check_semisimple().unwrap();
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, a: &FinDimAlgebra) -> Vector {
    (0..a.dim()).map(|_| CycNumber::from_int(a.ctx(), rng.gen_range(-2..=2))).collect()
}

/// A rank-one projective `A e` with `e` the averaging idempotent of `K[G]`, and `B = e b e`.
fn projective(rng: &mut ChaCha8Rng, a: &FinDimAlgebra) -> ProjectiveModuleData {
    let ctx = a.ctx();
    let inv = BigRational::new(BigInt::from(1), BigInt::from(a.dim()));
    let e: Vector = vec![CycNumber::from_rational(ctx, inv); a.dim()];
    let b = random_element(rng, a);
    ProjectiveModuleData { n: 1, e: vec![e.clone()], b: vec![a.mul(&a.mul(&e, &b), &e)] }
}

/// `E = 1`, `B = b` on the free module of rank one.
fn free(rng: &mut ChaCha8Rng, a: &FinDimAlgebra) -> ProjectiveModuleData {
    ProjectiveModuleData { n: 1, e: vec![a.unit().to_vec()], b: vec![random_element(rng, a)] }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn twisted_hh0_counts_fixed_orbits(seed in any::<u64>()) {
        let s = random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), 0).unwrap();
        prop_assume!(s.algebra_dim() <= DENSE_ALGEBRA_LIMIT);
        prop_assert_eq!(twisted_hh_dim(&s), s.fixed().orbit_count());
        s.algebra().check_semisimple().unwrap();
    }

    #[test]
    fn cyclicity_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = make_context(1).unwrap();
        let (ka, kb) = (SmallAlgebra::random(&mut rng), SmallAlgebra::random(&mut rng));
        let (a, b) = (Arc::new(ka.build(&ctx)), Arc::new(kb.build(&ctx)));
        let q = random_bimodule(&mut rng, &ctx, (&a, ka), (&b, kb), 3).unwrap();
        let p = random_bimodule(&mut rng, &ctx, (&b, kb), (&a, ka), 3).unwrap();
        let there = cyclicity_iso(&q, &p).unwrap();
        let back = cyclicity_iso(&p, &q).unwrap();
        prop_assert!(there.backward.mat_mul(&there.forward).unwrap().is_identity());
        // the reverse flip is the inverse of the forward one
        prop_assert!(back.forward.mat_mul(&there.forward).unwrap().is_identity());
    }

    #[test]
    fn hattori_stallings_is_additive_and_basis_free(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Scenario::builtin(["s3-inertia", "z4-circle"][which]).unwrap();
        let a = Arc::new(group_algebra(&s.group, &s.ctx));
        let q = Bimodule::regular(&a);
        let hh = hh0(&q).unwrap();
        let (p1, p2) = (projective(&mut rng, &a), free(&mut rng, &a));
        let (c1, c2) = (hattori_stallings(&p1, &q, &hh).unwrap(), hattori_stallings(&p2, &q, &hh).unwrap());
        let sum = p1.direct_sum(&p2, a.dim(), q.dim(), &s.ctx);
        prop_assert_eq!(hattori_stallings(&sum, &q, &hh).unwrap(), vec_add(&c1, &c2));
        // conjugate by a group element, and the sum by the swap of summands
        let g = rng.gen_range(0..s.group.order());
        let u = vec![unit_vector(&s.ctx, a.dim(), g)];
        let u_inv = vec![unit_vector(&s.ctx, a.dim(), s.group.inv(g))];
        prop_assert_eq!(hattori_stallings(&p1.conjugate(&q, &u, &u_inv).unwrap(), &q, &hh).unwrap(), c1.clone());
        let zero = vec![CycNumber::zero(&s.ctx); a.dim()];
        let one = a.unit().to_vec();
        let swap = vec![zero.clone(), one.clone(), one, zero];
        let swapped = sum.conjugate(&q, &swap, &swap).unwrap();
        prop_assert_eq!(hattori_stallings(&swapped, &q, &hh).unwrap(), vec_add(&c1, &c2));
    }
}
