use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use shtuka_core::exactfield::{make_context, Ctx, CycNumber, FieldMatrix};

const CONDUCTORS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn number(ctx: &Ctx, coeffs: &[(i64, i64)]) -> CycNumber {
    let c = (0..ctx.degree())
        .map(|i| {
            let (n, d) = coeffs[i % coeffs.len()];
            BigRational::new(BigInt::from(n), BigInt::from(d))
        })
        .collect();
    CycNumber::from_coeffs(ctx, c).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 1..6)
}

fn matrix(ctx: &Ctx, n: usize, m: usize, entries: &[i64]) -> FieldMatrix {
    let mut a = FieldMatrix::zeros(ctx, n, m);
    for i in 0..n {
        for j in 0..m {
            let k = (i * m + j) % entries.len();
            a.set(i, j, CycNumber::from_int(ctx, entries[k]) + CycNumber::zeta_pow(ctx, entries[k]));
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(ci in 0..CONDUCTORS.len(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let ctx = make_context(CONDUCTORS[ci]).unwrap();
        let (a, b, c) = (number(&ctx, &a), number(&ctx, &b), number(&ctx, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(ci in 0..CONDUCTORS.len(), a in coeffs(), b in coeffs()) {
        let ctx = make_context(CONDUCTORS[ci]).unwrap();
        let (a, b) = (number(&ctx, &a), number(&ctx, &b));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert!(CycNumber::one(&ctx).conj().is_one());
    }

    #[test]
    fn kernel_vectors_are_killed_and_rank_ignores_row_order(
        ci in 0..CONDUCTORS.len(),
        n in 1usize..5,
        m in 1usize..5,
        entries in prop::collection::vec(-2i64..=2, 1..20),
        shift in 0usize..5,
    ) {
        let ctx = make_context(CONDUCTORS[ci]).unwrap();
        let a = matrix(&ctx, n, m, &entries);
        let (rank, kernel) = a.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), m);
        for v in &kernel {
            prop_assert!(a.apply(v).unwrap().iter().all(CycNumber::is_zero));
        }
        let rows: Vec<Vec<CycNumber>> = (0..n).map(|i| a.row((i + shift) % n).to_vec()).collect();
        prop_assert_eq!(FieldMatrix::from_rows(&ctx, rows).unwrap().rank(), rank);
    }

    #[test]
    fn trace_is_cyclic(
        ci in 0..CONDUCTORS.len(),
        n in 1usize..=4,
        x in prop::collection::vec(-3i64..=3, 1..16),
        y in prop::collection::vec(-3i64..=3, 1..16),
    ) {
        let ctx = make_context(CONDUCTORS[ci]).unwrap();
        let (a, b) = (matrix(&ctx, n, n, &x), matrix(&ctx, n, n, &y));
        prop_assert_eq!(a.mat_mul(&b).unwrap().mat_trace().unwrap(), b.mat_mul(&a).unwrap().mat_trace().unwrap());
    }
}
