use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactfield::{Ctx, CycNumber, FieldMatrix, Vector};
use crate::groups::FinGroup;

use super::character::Character;

/// A matrix representation with one matrix per group element, indexed like the
/// group's element list.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<FinGroup>,
    ctx: Ctx,
    dim: usize,
    mats: Vec<FieldMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Trivial,
    Permutation,
    Regular,
    AbelianCharacter(i64),
}

pub(crate) fn same_group(a: &Arc<FinGroup>, b: &Arc<FinGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Representation {
    /// Extend generator matrices along the Cayley graph, checking every edge.
    pub fn from_generator_matrices(
        group: &Arc<FinGroup>,
        ctx: &Ctx,
        dim: usize,
        gens: &[FieldMatrix],
    ) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(Error::NotARepresentation(format!(
                "{} generator matrices for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        for m in gens {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::NotARepresentation(format!(
                    "generator matrix is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.ctx().conductor() != ctx.conductor() {
                return Err(Error::ContextMismatch(m.ctx().conductor(), ctx.conductor()));
            }
        }
        let n = group.order();
        let mut table: Vec<Option<FieldMatrix>> = vec![None; n];
        table[group.identity()] = Some(FieldMatrix::identity(ctx, dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let mx = table[x].clone().expect("visited");
            for (gi, &g) in group.generators().iter().enumerate() {
                let y = group.mul(g, x);
                let my = gens[gi].mat_mul(&mx)?;
                match &table[y] {
                    Some(existing) => {
                        if existing != &my {
                            return Err(Error::NotARepresentation(format!(
                                "inconsistent matrices at element {}",
                                group.element(y)
                            )));
                        }
                    }
                    None => {
                        table[y] = Some(my);
                        queue.push_back(y);
                    }
                }
            }
        }
        let mats = table.into_iter().map(|m| m.expect("group generated by its generators")).collect();
        Ok(Representation { group: group.clone(), ctx: ctx.clone(), dim, mats })
    }

    /// Wrap an explicit element table after verifying the homomorphism property on all pairs.
    pub fn from_table(group: &Arc<FinGroup>, ctx: &Ctx, dim: usize, mats: Vec<FieldMatrix>) -> Result<Self> {
        let rep = Representation { group: group.clone(), ctx: ctx.clone(), dim, mats };
        rep.verify()?;
        Ok(rep)
    }

    fn from_table_unchecked(group: &Arc<FinGroup>, ctx: &Ctx, dim: usize, mats: Vec<FieldMatrix>) -> Self {
        Representation { group: group.clone(), ctx: ctx.clone(), dim, mats }
    }

    /// Exhaustive check of `ρ(e) = I` and `ρ(gh) = ρ(g)ρ(h)`.
    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        if self.mats.len() != g.order() {
            return Err(Error::NotARepresentation("table length differs from group order".into()));
        }
        if !self.mats[g.identity()].is_identity() {
            return Err(Error::NotARepresentation("identity does not act trivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.mats[a].mat_mul(&self.mats[b])? != self.mats[g.mul(a, b)] {
                    return Err(Error::NotARepresentation(format!(
                        "ρ({})ρ({}) ≠ ρ(product)",
                        g.element(a),
                        g.element(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn builtin(group: &Arc<FinGroup>, ctx: &Ctx, kind: RepKind) -> Result<Self> {
        let n = group.order();
        let one = CycNumber::one(ctx);
        match kind {
            RepKind::Trivial => {
                Ok(Self::from_table_unchecked(group, ctx, 1, vec![FieldMatrix::identity(ctx, 1); n]))
            }
            RepKind::Permutation => {
                let m = group.degree();
                let mats = group
                    .elements()
                    .iter()
                    .map(|p| {
                        let mut a = FieldMatrix::zeros(ctx, m, m);
                        for i in 0..m {
                            a.set(p.apply(i), i, one.clone());
                        }
                        a
                    })
                    .collect();
                Ok(Self::from_table_unchecked(group, ctx, m, mats))
            }
            RepKind::Regular => {
                let mats = (0..n)
                    .map(|g| {
                        let mut a = FieldMatrix::zeros(ctx, n, n);
                        for h in 0..n {
                            a.set(group.mul(g, h), h, one.clone());
                        }
                        a
                    })
                    .collect();
                Ok(Self::from_table_unchecked(group, ctx, n, mats))
            }
            RepKind::AbelianCharacter(k) => {
                let c = group
                    .cyclic_generator()
                    .ok_or_else(|| Error::KindMismatch("abelian_character needs a cyclic group".into()))?;
                if ctx.conductor() as usize % n != 0 {
                    return Err(Error::KindMismatch(format!(
                        "conductor {} not divisible by group order {n}",
                        ctx.conductor()
                    )));
                }
                let step = ctx.conductor() as i64 / n as i64;
                let mut mats = vec![FieldMatrix::identity(ctx, 1); n];
                let mut x = group.identity();
                for j in 0..n as i64 {
                    mats[x] = FieldMatrix::scalar(ctx, 1, &CycNumber::zeta_pow(ctx, k * j * step));
                    x = group.mul(c, x);
                }
                Ok(Self::from_table_unchecked(group, ctx, 1, mats))
            }
        }
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &FieldMatrix {
        &self.mats[g]
    }

    pub fn matrices(&self) -> &[FieldMatrix] {
        &self.mats
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        if self.ctx.conductor() != other.ctx.conductor() {
            return Err(Error::ContextMismatch(self.ctx.conductor(), other.ctx.conductor()));
        }
        Ok(())
    }

    /// Kronecker product, basis `e_i ⊗ f_j` ordered lexicographically.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.mat_kron(b)).collect::<Result<_>>()?;
        Ok(Self::from_table_unchecked(&self.group, &self.ctx, self.dim * other.dim, mats))
    }

    /// Contragredient: `g ↦ ρ(g⁻¹)ᵀ`.
    pub fn dual(&self) -> Self {
        let mats = (0..self.group.order()).map(|g| self.mats[self.group.inv(g)].transpose()).collect();
        Self::from_table_unchecked(&self.group, &self.ctx, self.dim, mats)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.dim + other.dim;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = FieldMatrix::zeros(&self.ctx, d, d);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m.set(self.dim + i, self.dim + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Ok(Self::from_table_unchecked(&self.group, &self.ctx, d, mats))
    }

    /// Pull back along a group homomorphism into this representation's group.
    pub fn restrict_along(&self, f: &GroupMap) -> Result<Self> {
        if !same_group(&f.target, &self.group) {
            return Err(Error::GroupMismatch);
        }
        let mats = f.table.iter().map(|&x| self.mats[x].clone()).collect();
        Ok(Self::from_table_unchecked(&f.source, &self.ctx, self.dim, mats))
    }

    /// `(1/|G|) Σ_g ρ(g)`, checked to be an idempotent absorbing every `ρ(g)`.
    pub fn averaging_projector(&self) -> Result<FieldMatrix> {
        averaging_projector(&self.ctx, self.dim, self.mats.iter())
    }

    /// Basis of `V^G`: the pivot columns of the averaging projector.
    pub fn invariant_basis(&self) -> Result<Vec<Vector>> {
        Ok(self.averaging_projector()?.column_space_basis())
    }

    pub fn character(&self) -> Character {
        let values = self
            .group
            .conjugacy_classes()
            .iter()
            .map(|c| self.mats[c.representative].mat_trace().expect("square"))
            .collect();
        Character::new(&self.group, values)
    }

    /// Same group and identical matrix tables.
    pub fn same_matrices(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.mats == other.mats
    }
}

/// Average of a finite family of square matrices that is assumed closed under products.
pub fn averaging_projector<'a>(
    ctx: &Ctx,
    dim: usize,
    mats: impl Iterator<Item = &'a FieldMatrix> + Clone,
) -> Result<FieldMatrix> {
    let mut sum = FieldMatrix::zeros(ctx, dim, dim);
    let mut count = 0i64;
    for m in mats.clone() {
        sum = sum.mat_add(m)?;
        count += 1;
    }
    let inv = CycNumber::from_rational(ctx, BigRational::new(BigInt::from(1), BigInt::from(count)));
    let p = sum.scale(&inv);
    if p.mat_mul(&p)? != p {
        return Err(Error::InvarianceViolation("averaging projector is not idempotent".into()));
    }
    for m in mats {
        if m.mat_mul(&p)? != p {
            return Err(Error::InvarianceViolation("averaging projector not absorbed".into()));
        }
    }
    Ok(p)
}

/// A homomorphism between finite groups, tabulated on all source elements.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub source: Arc<FinGroup>,
    pub target: Arc<FinGroup>,
    pub table: Vec<usize>,
}

impl GroupMap {
    /// Extend generator images along the Cayley graph; fails if inconsistent.
    pub fn from_generator_images(source: &Arc<FinGroup>, target: &Arc<FinGroup>, images: &[usize]) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        let mut table = vec![usize::MAX; source.order()];
        table[source.identity()] = target.identity();
        let mut queue = VecDeque::from([source.identity()]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in source.generators().iter().enumerate() {
                let y = source.mul(g, x);
                let fy = target.mul(images[gi], table[x]);
                if table[y] == usize::MAX {
                    table[y] = fy;
                    queue.push_back(y);
                } else if table[y] != fy {
                    return Err(Error::NotAHomomorphism(format!("inconsistent image at {}", source.element(y))));
                }
            }
        }
        Ok(GroupMap { source: source.clone(), target: target.clone(), table })
    }

    pub fn identity(g: &Arc<FinGroup>) -> Self {
        GroupMap { source: g.clone(), target: g.clone(), table: (0..g.order()).collect() }
    }

    pub fn trivial(source: &Arc<FinGroup>, target: &Arc<FinGroup>) -> Self {
        GroupMap { source: source.clone(), target: target.clone(), table: vec![target.identity(); source.order()] }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }
}

pub fn rep_from_generator_matrices(
    group: &Arc<FinGroup>,
    ctx: &Ctx,
    dim: usize,
    gens: &[FieldMatrix],
) -> Result<Representation> {
    Representation::from_generator_matrices(group, ctx, dim, gens)
}

pub fn builtin_rep(group: &Arc<FinGroup>, ctx: &Ctx, kind: RepKind) -> Result<Representation> {
    Representation::builtin(group, ctx, kind)
}

pub fn tensor(a: &Representation, b: &Representation) -> Result<Representation> {
    a.tensor(b)
}

pub fn dual(a: &Representation) -> Representation {
    a.dual()
}

pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    a.direct_sum(b)
}

pub fn restrict_along(f: &GroupMap, v: &Representation) -> Result<Representation> {
    v.restrict_along(f)
}

pub fn invariant_basis(v: &Representation) -> Result<Vec<Vector>> {
    v.invariant_basis()
}
