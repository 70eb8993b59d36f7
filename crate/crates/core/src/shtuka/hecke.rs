use std::sync::Arc;

use crate::charstack::CharGroupoid;
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, vec_is_zero, vec_kron, Ctx, CycNumber, FieldMatrix, Vector};
use crate::reptheory::Representation;
use crate::tracecalc::{Bimodule, FinDimAlgebra, TensorProduct};

/// Matrix of `⊗_j r_j(k)`.
pub fn fiber_matrix(slots: &[Representation], k: usize, ctx: &Ctx) -> FieldMatrix {
    slots.iter().fold(FieldMatrix::identity(ctx, 1), |acc, r| acc.mat_kron(r.matrix(k)).expect("kron"))
}

/// The bimodule `B_{V,f}` over the character-groupoid algebra: basis `(x, v, h)`
/// is the arrow `f(x) → h·f(x)` decorated by the fiber vector `e_v ∈ V`.
/// Arrows act on the left through `V` and on the right by precomposition.
#[derive(Clone, Debug)]
pub struct HeckeBimodule {
    base: Arc<CharGroupoid>,
    ctx: Ctx,
    slots: Vec<Representation>,
    map: Vec<usize>,
    fiber_dim: usize,
    fibers: Vec<FieldMatrix>,
}

/// A basis element `(x, v, h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeBasis {
    pub x: usize,
    pub v: usize,
    pub h: usize,
}

impl HeckeBimodule {
    /// `map` must commute with conjugation.
    pub fn new(base: &Arc<CharGroupoid>, ctx: &Ctx, slots: Vec<Representation>, map: Vec<usize>) -> Result<Self> {
        let g = base.group();
        let n = base.homs().len();
        if map.len() != n || map.iter().any(|&y| y >= n) {
            return Err(Error::DimensionMismatch("object map has the wrong shape".into()));
        }
        for r in &slots {
            if **r.group() != **g {
                return Err(Error::GroupMismatch);
            }
        }
        for x in 0..n {
            for &k in g.generators() {
                if map[base.act(k, x)] != base.act(k, map[x]) {
                    return Err(Error::CheckFailed(format!("object map is not equivariant at object {x}")));
                }
            }
        }
        let fiber_dim = slots.iter().map(Representation::dim).product();
        let fibers = (0..g.order()).map(|k| fiber_matrix(&slots, k, ctx)).collect();
        Ok(HeckeBimodule { base: base.clone(), ctx: ctx.clone(), slots, map, fiber_dim, fibers })
    }

    /// `B_{r,id}`: tensoring with the bundle of `r`.
    pub fn hecke(base: &Arc<CharGroupoid>, r: &Representation) -> Result<Self> {
        Self::new(base, r.ctx(), vec![r.clone()], (0..base.homs().len()).collect())
    }

    pub fn base(&self) -> &Arc<CharGroupoid> {
        &self.base
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn slots(&self) -> &[Representation] {
        &self.slots
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `V(k)`.
    pub fn fiber(&self, k: usize) -> &FieldMatrix {
        &self.fibers[k]
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn dim(&self) -> usize {
        self.base.homs().len() * self.fiber_dim * self.base.group().order()
    }

    pub fn index(&self, b: HeckeBasis) -> usize {
        (b.x * self.fiber_dim + b.v) * self.base.group().order() + b.h
    }

    pub fn basis(&self, i: usize) -> HeckeBasis {
        let ng = self.base.group().order();
        HeckeBasis { x: i / ng / self.fiber_dim, v: (i / ng) % self.fiber_dim, h: i % ng }
    }

    /// Object of the left idempotent, `h·f(x)`.
    pub fn target(&self, b: HeckeBasis) -> usize {
        self.base.act(b.h, self.map[b.x])
    }

    pub fn is_diagonal(&self, b: HeckeBasis) -> bool {
        self.target(b) == b.x
    }

    /// `B_{V,f} ⊗_A B_{W,f'} ≅ B_{V⊗W, f∘f'}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().cloned());
        let map = other.map.iter().map(|&y| self.map[y]).collect();
        Self::new(&self.base, &self.ctx, slots, map)
    }

    /// Normal form of `b1 ⊗ b2` in `self.compose(other)`: with `x = h'·f'(x')`,
    /// `(x, v, h) ⊗ (x', w, h') = (x', v ⊗ W(h) w, h h')`; zero when the idempotents differ.
    pub fn tensor_basis(&self, other: &Self, b1: HeckeBasis, b2: HeckeBasis) -> Option<(HeckeBasis, Vector)> {
        if b1.x != other.target(b2) {
            return None;
        }
        let g = self.base.group();
        let w = other.fibers[b1.h].column(b2.v);
        let v = unit_vector(&self.ctx, self.fiber_dim, b1.v);
        let fiber = vec_kron(&v, &w);
        Some((HeckeBasis { x: b2.x, v: 0, h: g.mul(b1.h, b2.h) }, fiber))
    }

    /// Dense realization over `alg`, which must be the groupoid algebra of the base.
    pub fn to_dense(&self, alg: &Arc<FinDimAlgebra>) -> Result<Bimodule> {
        let g = self.base.group();
        let (no, ng) = (self.base.homs().len(), g.order());
        if alg.dim() != no * ng {
            return Err(Error::DimensionMismatch("algebra is not the groupoid algebra of the base".into()));
        }
        let ctx = alg.ctx().clone();
        let n = self.dim();
        let mut left = Vec::with_capacity(alg.dim());
        let mut right = Vec::with_capacity(alg.dim());
        for y in 0..no {
            for k in 0..ng {
                let mut l = FieldMatrix::zeros(&ctx, n, n);
                let mut r = FieldMatrix::zeros(&ctx, n, n);
                for i in 0..n {
                    let b = self.basis(i);
                    if self.target(b) == y {
                        for j in 0..self.fiber_dim {
                            let c = self.fibers[k].get(j, b.v);
                            if !c.is_zero() {
                                l.set(self.index(HeckeBasis { x: b.x, v: j, h: g.mul(k, b.h) }), i, c.clone());
                            }
                        }
                    }
                    // right action of the arrow (y, k): y → k·y
                    if self.base.act(k, y) == b.x {
                        r.set(self.index(HeckeBasis { x: y, v: b.v, h: g.mul(b.h, k) }), i, CycNumber::one(&ctx));
                    }
                }
                left.push(l);
                right.push(r);
            }
        }
        Bimodule::new(alg, alg, n, left, right)
    }
}

/// Matrix from `first ⊗_A second` (generic quotient coordinates) to the dense
/// basis of `first.compose(second)`, checked to be an invertible bimodule map.
pub fn normal_form_map(
    first: &HeckeBimodule,
    second: &HeckeBimodule,
    t: &TensorProduct,
    composite: &Bimodule,
) -> Result<FieldMatrix> {
    let comp = first.compose(second)?;
    let ctx = composite.left_algebra().ctx().clone();
    let d = t.quotient.dim();
    let np = t.p_dim;
    let mut cols = Vec::with_capacity(d);
    for k in 0..d {
        let raw = t.quotient.lift(&unit_vector(&ctx, d, k));
        cols.push(raw_normal_form(first, second, &comp, &raw, np)?);
    }
    let m = FieldMatrix::from_columns(&ctx, comp.dim(), &cols);
    for r in t.quotient.relations().basis() {
        if !vec_is_zero(&raw_normal_form(first, second, &comp, r, np)?) {
            return Err(Error::CheckFailed("normal form does not respect the balancing relations".into()));
        }
    }
    for i in 0..composite.left_algebra().dim() {
        if m.mat_mul(t.bimodule.left_basis(i))? != composite.left_basis(i).mat_mul(&m)? {
            return Err(Error::CheckFailed(format!("normal form is not a left module map at basis {i}")));
        }
        if m.mat_mul(t.bimodule.right_basis(i))? != composite.right_basis(i).mat_mul(&m)? {
            return Err(Error::CheckFailed(format!("normal form is not a right module map at basis {i}")));
        }
    }
    if !m.is_square() || m.inverse().is_none() {
        return Err(Error::CheckFailed("normal form is not invertible".into()));
    }
    Ok(m)
}

/// Normal form of a raw vector of `first ⊗ second` (index `i · dim second + j`).
pub fn raw_normal_form(
    first: &HeckeBimodule,
    second: &HeckeBimodule,
    comp: &HeckeBimodule,
    raw: &[CycNumber],
    np: usize,
) -> Result<Vector> {
    let mut out = vec![CycNumber::zero(comp.ctx()); comp.dim()];
    for (idx, c) in raw.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (b1, b2) = (first.basis(idx / np), second.basis(idx % np));
        if let Some((b, fiber)) = first.tensor_basis(second, b1, b2) {
            for (j, f) in fiber.iter().enumerate() {
                if !f.is_zero() {
                    out[comp.index(HeckeBasis { v: j, ..b })] += &(c * f);
                }
            }
        }
    }
    Ok(out)
}
