//! `HH₀` of the bimodules `B_{V,f}` computed orbitwise on the fixed locus.
//!
//! Only diagonal basis elements `(x, v, h)` with `h·f(x) = x` survive in `HH₀`,
//! and such an element is the fixed point `(x, h⁻¹)` decorated by `v`. What is
//! left is `⊕_p V` over the fixed points of each orbit, modulo
//! `(k·p, V(k) v) ∼ (p, v)`.

use crate::charstack::{FixedGroupoid, FixedObject, SectionSpace};
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, vec_is_zero, Ctx, CycNumber, FieldMatrix, RowSpace, Vector};
use crate::reptheory::Representation;
use crate::tracecalc::Quotient;

use super::hecke::fiber_matrix;

/// One orbit of fixed points with its quotient of `⊕_{p ∈ orbit} V`.
#[derive(Clone, Debug)]
pub struct HHBlock {
    pub members: Vec<usize>,
    pub quotient: Quotient,
}

impl HHBlock {
    fn position(&self, p: usize) -> usize {
        self.members.binary_search(&p).expect("fixed point in its orbit")
    }
}

#[derive(Clone, Debug)]
pub struct StructuredHH {
    slots: Vec<Representation>,
    dims: Vec<usize>,
    fiber_dim: usize,
    blocks: Vec<HHBlock>,
    offsets: Vec<usize>,
    fibers: Vec<FieldMatrix>,
}

impl StructuredHH {
    pub fn new(fixed: &FixedGroupoid, ctx: &Ctx, slots: &[Representation]) -> Result<Self> {
        let g = fixed.group();
        for r in slots {
            if **r.group() != **g {
                return Err(Error::GroupMismatch);
            }
        }
        let dims: Vec<usize> = slots.iter().map(Representation::dim).collect();
        let fd: usize = dims.iter().product();
        let fibers: Vec<FieldMatrix> = (0..g.order()).map(|k| fiber_matrix(slots, k, ctx)).collect();
        let mut blocks = Vec::new();
        let mut offsets = vec![0];
        for orbit in &fixed.orbits().orbits {
            let mut members = orbit.members.clone();
            members.sort_unstable();
            let n = members.len() * fd;
            let pos = |p: usize| members.binary_search(&p).expect("orbit closed under conjugation");
            let mut rel = RowSpace::new(ctx, n);
            'gens: for &p in &members {
                for &k in g.generators() {
                    let (a, b) = (pos(fixed.act(k, p)), pos(p));
                    for j in 0..fd {
                        let mut row = vec![CycNumber::zero(ctx); n];
                        for i in 0..fd {
                            row[a * fd + i] = fibers[k].get(i, j).clone();
                        }
                        row[b * fd + j] -= &CycNumber::one(ctx);
                        if !vec_is_zero(&row) {
                            rel.insert(&row);
                        }
                        if rel.is_full() {
                            break 'gens;
                        }
                    }
                }
            }
            let quotient = Quotient::new(rel);
            offsets.push(offsets.last().unwrap() + quotient.dim());
            blocks.push(HHBlock { members, quotient });
        }
        Ok(StructuredHH { slots: slots.to_vec(), dims, fiber_dim: fd, blocks, offsets, fibers })
    }

    pub fn slots(&self) -> &[Representation] {
        &self.slots
    }

    pub fn slot_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    /// `V(k)`.
    pub fn fiber(&self, k: usize) -> &FieldMatrix {
        &self.fibers[k]
    }

    pub fn blocks(&self) -> &[HHBlock] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.quotient.dim()).collect()
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b + 1]
    }

    /// Raw vector of block `b` with `v` placed at fixed point `p`.
    pub fn raw_at(&self, b: usize, p: usize, v: &[CycNumber]) -> Vector {
        let block = &self.blocks[b];
        let ctx = self.fibers[0].ctx();
        let mut raw = vec![CycNumber::zero(ctx); block.members.len() * self.fiber_dim];
        let at = block.position(p) * self.fiber_dim;
        raw[at..at + self.fiber_dim].clone_from_slice(v);
        raw
    }

    /// Class of `v` at the fixed point `p`, in global coordinates.
    pub fn class_at(&self, fixed: &FixedGroupoid, p: usize, v: &[CycNumber]) -> Vector {
        let b = fixed.orbits().orbit_of[p];
        let ctx = self.fibers[0].ctx();
        let mut out = vec![CycNumber::zero(ctx); self.dim()];
        let local = self.blocks[b].quotient.project(&self.raw_at(b, p, v));
        out[self.block_range(b)].clone_from_slice(&local);
        out
    }

    /// Matrix of a map `V_p → W_p` given pointwise by `stage`, after checking
    /// that it sends every relation of `self` to zero in `dst`.
    pub fn descend(
        &self,
        dst: &StructuredHH,
        fixed: &FixedGroupoid,
        name: &str,
        stage: impl Fn(&FixedObject, &[CycNumber]) -> Result<Vector>,
    ) -> Result<FieldMatrix> {
        if dst.blocks.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch("HH₀ spaces over different fixed loci".into()));
        }
        let ctx = self.fibers[0].ctx().clone();
        let (fs, fd) = (self.fiber_dim, dst.fiber_dim);
        let mut m = FieldMatrix::zeros(&ctx, dst.dim(), self.dim());
        for (b, block) in self.blocks.iter().enumerate() {
            let apply = |raw: &[CycNumber]| -> Result<Vector> {
                let mut out = vec![CycNumber::zero(&ctx); block.members.len() * fd];
                for (i, &p) in block.members.iter().enumerate() {
                    let x = &raw[i * fs..(i + 1) * fs];
                    if vec_is_zero(x) {
                        continue;
                    }
                    let y = stage(fixed.object(p), x)?;
                    if y.len() != fd {
                        return Err(Error::DimensionMismatch(format!("stage {name} has the wrong target fiber")));
                    }
                    for (o, yv) in out[i * fd..(i + 1) * fd].iter_mut().zip(&y) {
                        *o += yv;
                    }
                }
                Ok(dst.blocks[b].quotient.project(&out))
            };
            for r in block.quotient.relations().basis() {
                if !vec_is_zero(&apply(r)?) {
                    return Err(Error::PipelineDisagreement(format!(
                        "stage {name} does not descend to HH₀ on orbit {b}"
                    )));
                }
            }
            let k = block.quotient.dim();
            for c in 0..k {
                let image = apply(&block.quotient.lift(&unit_vector(&ctx, k, c)))?;
                for (r, v) in image.into_iter().enumerate() {
                    m.set(dst.offsets[b] + r, self.offsets[b] + c, v);
                }
            }
        }
        Ok(m)
    }

    /// The norm map `[u] ↦ Σ_{s ∈ Aut} V(s) Σ_p V(t_p)⁻¹ u_p` into the invariants at each
    /// orbit representative, in the coordinates of `sections`; returns it with its inverse.
    pub fn comparison(&self, fixed: &FixedGroupoid, sections: &SectionSpace) -> Result<(FieldMatrix, FieldMatrix)> {
        let g = fixed.group();
        let ctx = self.fibers[0].ctx().clone();
        let fd = self.fiber_dim;
        if sections.orbit_dims() != self.block_dims() {
            return Err(Error::PipelineDisagreement(format!(
                "HH₀ block dimensions {:?} differ from invariant dimensions {:?}",
                self.block_dims(),
                sections.orbit_dims()
            )));
        }
        let mut c = FieldMatrix::zeros(&ctx, self.dim(), self.dim());
        for (b, block) in self.blocks.iter().enumerate() {
            let basis = FieldMatrix::from_columns(&ctx, fd, &sections.per_orbit[b]);
            let stab = fixed.stabilizer(b);
            let k = block.quotient.dim();
            for col in 0..k {
                let raw = block.quotient.lift(&unit_vector(&ctx, k, col));
                let mut at_rep = vec![CycNumber::zero(&ctx); fd];
                for (i, &p) in block.members.iter().enumerate() {
                    let x = &raw[i * fd..(i + 1) * fd];
                    if vec_is_zero(x) {
                        continue;
                    }
                    let t_inv = g.inv(fixed.orbits().transporter[p]);
                    for (o, y) in at_rep.iter_mut().zip(self.fibers[t_inv].apply(x)?) {
                        *o += &y;
                    }
                }
                let mut normed = vec![CycNumber::zero(&ctx); fd];
                for &s in stab {
                    for (o, y) in normed.iter_mut().zip(self.fibers[s].apply(&at_rep)?) {
                        *o += &y;
                    }
                }
                let coords = basis.solve_linear(&normed)?.ok_or_else(|| {
                    Error::PipelineDisagreement(format!("norm of an HH₀ class on orbit {b} is not invariant"))
                })?;
                for (r, v) in coords.into_iter().enumerate() {
                    c.set(self.offsets[b] + r, self.offsets[b] + col, v);
                }
            }
        }
        let inv = c
            .inverse()
            .ok_or_else(|| Error::PipelineDisagreement("HH₀ is not identified with the invariants".into()))?;
        Ok((c, inv))
    }
}
