use std::sync::Arc;

use rand::Rng;

use super::algebra::{group_algebra, FinDimAlgebra};
use super::bimodule::Bimodule;
use crate::error::Result;
use crate::exactfield::{Ctx, CycNumber, FieldMatrix};
use crate::groups::{FinGroup, Permutation};

/// One of `K`, `K × K`, `K[ℤ/2]`, all of which are split semisimple with
/// idempotents indexed by `0..blocks`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallAlgebra {
    Field,
    Diagonal2,
    GroupZ2,
}

impl SmallAlgebra {
    pub fn build(self, ctx: &Ctx) -> FinDimAlgebra {
        match self {
            SmallAlgebra::Field => FinDimAlgebra::diagonal(ctx, 1),
            SmallAlgebra::Diagonal2 => FinDimAlgebra::diagonal(ctx, 2),
            SmallAlgebra::GroupZ2 => {
                let g = FinGroup::from_permutations(2, &[Permutation::parse_cycles(2, "(0 1)").expect("cycle")])
                    .expect("ℤ/2");
                group_algebra(&g, ctx)
            }
        }
    }

    fn blocks(self) -> usize {
        match self {
            SmallAlgebra::Field => 1,
            _ => 2,
        }
    }

    /// Action matrices of the basis on a module where vector `i` lies in block `labels[i]`.
    fn actions(self, ctx: &Ctx, labels: &[usize]) -> Vec<FieldMatrix> {
        let d = labels.len();
        let diag = |f: &dyn Fn(usize) -> i64| {
            let mut m = FieldMatrix::zeros(ctx, d, d);
            for (i, &l) in labels.iter().enumerate() {
                m.set(i, i, CycNumber::from_int(ctx, f(l)));
            }
            m
        };
        match self {
            SmallAlgebra::Field => vec![FieldMatrix::identity(ctx, d)],
            SmallAlgebra::Diagonal2 => vec![diag(&|l| (l == 0) as i64), diag(&|l| (l == 1) as i64)],
            // group elements sorted: identity, then the transposition
            SmallAlgebra::GroupZ2 => vec![FieldMatrix::identity(ctx, d), diag(&|l| if l == 0 { 1 } else { -1 })],
        }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        [SmallAlgebra::Field, SmallAlgebra::Diagonal2, SmallAlgebra::GroupZ2][rng.gen_range(0..3)]
    }
}

fn random_invertible(rng: &mut impl Rng, ctx: &Ctx, d: usize) -> (FieldMatrix, FieldMatrix) {
    loop {
        let mut m = FieldMatrix::zeros(ctx, d, d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, CycNumber::from_int(ctx, rng.gen_range(-2..=2)));
            }
        }
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// A random `(A, B)`-bimodule of dimension `1..=max_dim` over small split algebras,
/// written in a random basis.
pub fn random_bimodule(
    rng: &mut impl Rng,
    ctx: &Ctx,
    a: (&Arc<FinDimAlgebra>, SmallAlgebra),
    b: (&Arc<FinDimAlgebra>, SmallAlgebra),
    max_dim: usize,
) -> Result<Bimodule> {
    let d = rng.gen_range(1..=max_dim);
    let left_labels: Vec<usize> = (0..d).map(|_| rng.gen_range(0..a.1.blocks())).collect();
    let right_labels: Vec<usize> = (0..d).map(|_| rng.gen_range(0..b.1.blocks())).collect();
    let (s, s_inv) = random_invertible(rng, ctx, d);
    let conj = |m: FieldMatrix| s.mat_mul(&m).and_then(|x| x.mat_mul(&s_inv)).expect("shape");
    let left = a.1.actions(ctx, &left_labels).into_iter().map(conj).collect();
    let right = b.1.actions(ctx, &right_labels).into_iter().map(conj).collect();
    Bimodule::new(a.0, b.0, d, left, right)
}
