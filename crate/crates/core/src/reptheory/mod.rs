//! Exact matrix representations of finite groups and their characters.

mod character;
mod rep;

pub use character::{inner_product, Character};
pub use rep::{
    averaging_projector, builtin_rep, direct_sum, dual, invariant_basis, rep_from_generator_matrices, restrict_along,
    tensor, GroupMap, RepKind, Representation,
};

/// `character_of(V)`.
pub fn character_of(v: &Representation) -> Character {
    v.character()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::exactfield::{make_context, CycNumber, FieldMatrix};
    use crate::groups::{FinGroup, Permutation};

    fn s3() -> Arc<FinGroup> {
        let gens = [Permutation::parse_cycles(3, "(0 1)").unwrap(), Permutation::parse_cycles(3, "(0 1 2)").unwrap()];
        Arc::new(FinGroup::from_permutations(3, &gens).unwrap())
    }

    fn z3() -> Arc<FinGroup> {
        Arc::new(FinGroup::from_permutations(3, &[Permutation::parse_cycles(3, "(0 1 2)").unwrap()]).unwrap())
    }

    fn std_rep(g: &Arc<FinGroup>) -> Representation {
        let ctx = make_context(1).unwrap();
        let a = FieldMatrix::from_int_rows(&ctx, &[&[-1, 1], &[0, 1]]);
        let b = FieldMatrix::from_int_rows(&ctx, &[&[-1, 1], &[-1, 0]]);
        rep_from_generator_matrices(g, &ctx, 2, &[a, b]).unwrap()
    }

    fn ints(ctx: &crate::exactfield::Ctx, v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from_int(ctx, x)).collect()
    }

    #[test]
    fn std_character_by_hand() {
        // integer oracle: multiply the 2x2 generator matrices along each class representative
        type M = [[i64; 2]; 2];
        fn mul(a: M, b: M) -> M {
            let mut c = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        }
        let s: M = [[-1, 1], [0, 1]];
        let r: M = [[-1, 1], [-1, 0]];
        let tr = |m: M| m[0][0] + m[1][1];
        assert_eq!((tr([[1, 0], [0, 1]]), tr(s), tr(r), tr(mul(r, r)), tr(mul(s, r))), (2, 0, -1, -1, 0));

        let g = s3();
        let v = std_rep(&g);
        assert!(v.verify().is_ok());
        let ctx = v.ctx().clone();
        assert_eq!(v.character().values(), &ints(&ctx, &[2, 0, -1])[..]);
    }

    #[test]
    fn bad_generator_matrix() {
        let ctx = make_context(1).unwrap();
        let g = Arc::new(FinGroup::from_permutations(2, &[Permutation::parse_cycles(2, "(0 1)").unwrap()]).unwrap());
        let m = FieldMatrix::from_int_rows(&ctx, &[&[2]]);
        assert!(rep_from_generator_matrices(&g, &ctx, 1, &[m]).is_err());
        let ok = FieldMatrix::from_int_rows(&ctx, &[&[1]]);
        let t = rep_from_generator_matrices(&g, &ctx, 1, &[ok]).unwrap();
        assert_eq!(t.character().values(), &ints(&ctx, &[1, 1])[..]);
    }

    #[test]
    fn builtins() {
        let ctx3 = make_context(3).unwrap();
        let z = z3();
        let chi = builtin_rep(&z, &ctx3, RepKind::AbelianCharacter(1)).unwrap();
        assert_eq!(chi.dim(), 1);
        assert_eq!(chi.matrix(z.generators()[0]).get(0, 0), &CycNumber::zeta_pow(&ctx3, 1));
        assert!(chi.verify().is_ok());
        assert!(chi.dual().same_matrices(&builtin_rep(&z, &ctx3, RepKind::AbelianCharacter(2)).unwrap()));

        let ctx = make_context(1).unwrap();
        let g = s3();
        let p = builtin_rep(&g, &ctx, RepKind::Permutation).unwrap();
        assert!(p.verify().is_ok());
        assert_eq!(p.character().values(), &ints(&ctx, &[3, 1, 0])[..]);
        let z2 = Arc::new(FinGroup::from_permutations(2, &[Permutation::parse_cycles(2, "(0 1)").unwrap()]).unwrap());
        let reg = builtin_rep(&z2, &ctx, RepKind::Regular).unwrap();
        assert!(reg.verify().is_ok());
        assert_eq!(reg.character().values(), &ints(&ctx, &[2, 0])[..]);
        assert!(builtin_rep(&g, &ctx, RepKind::AbelianCharacter(1)).is_err());
        assert!(builtin_rep(&z, &ctx, RepKind::AbelianCharacter(1)).is_err());
    }

    #[test]
    fn tensor_dual_restrict() {
        let g = s3();
        let v = std_rep(&g);
        let ctx = v.ctx().clone();
        let vv = tensor(&v, &v).unwrap();
        assert!(vv.verify().is_ok());
        assert_eq!(vv.character().values(), &ints(&ctx, &[4, 0, 1])[..]);
        let triv = builtin_rep(&g, &ctx, RepKind::Trivial).unwrap();
        assert_eq!(tensor(&triv, &v).unwrap().character(), v.character());
        assert_eq!(v.dual().character(), v.character().conj());
        assert_eq!(direct_sum(&v, &triv).unwrap().character(), v.character().add(&triv.character()).unwrap());

        let z = z3();
        let c = g.index_of(&Permutation::parse_cycles(3, "(0 1 2)").unwrap()).unwrap();
        let inc = GroupMap::from_generator_images(&z, &g, &[c]).unwrap();
        let r = restrict_along(&inc, &v).unwrap();
        assert!(r.verify().is_ok());
        assert_eq!(r.character().values(), &ints(&ctx, &[2, -1, -1])[..]);
        let r = restrict_along(&GroupMap::trivial(&z, &g), &v).unwrap();
        assert_eq!(r.character().values(), &ints(&ctx, &[2, 2, 2])[..]);
        assert!(restrict_along(&GroupMap::identity(&g), &v).unwrap().same_matrices(&v));
        let t = g.index_of(&Permutation::parse_cycles(3, "(0 1)").unwrap()).unwrap();
        assert!(GroupMap::from_generator_images(&z, &g, &[t]).is_err());
    }

    #[test]
    fn invariants_and_inner_products() {
        let g = s3();
        let v = std_rep(&g);
        let ctx = v.ctx().clone();
        assert_eq!(invariant_basis(&tensor(&v, &v).unwrap()).unwrap().len(), 1);
        assert_eq!(invariant_basis(&v).unwrap().len(), 0);
        let triv = builtin_rep(&g, &ctx, RepKind::Trivial).unwrap();
        assert_eq!(invariant_basis(&triv).unwrap().len(), 1);

        let one = CycNumber::one(&ctx);
        assert_eq!(inner_product(&v.character(), &v.character()).unwrap(), one);
        let sign_vals = ints(&ctx, &[1, -1, 1]);
        let sign = Character::new(&g, sign_vals);
        assert!(inner_product(&triv.character(), &sign).unwrap().is_zero());
        let reg = builtin_rep(&g, &ctx, RepKind::Regular).unwrap();
        assert_eq!(inner_product(&reg.character(), &triv.character()).unwrap(), one);
    }
}
