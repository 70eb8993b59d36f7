use crate::charstack::{bundle_from_rep, sections, FixedObject, SectionSpace};
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, vec_is_zero, vec_scale, CycNumber, FieldMatrix, Vector};
use crate::reptheory::Representation;
use crate::tracecalc::{hh0, Bimodule, HHSpace};

use super::hecke::{HeckeBasis, HeckeBimodule};
use super::hh::StructuredHH;
use super::scenario::Scenario;

/// Largest groupoid algebra for which the dense bimodule calculus is run.
pub const DENSE_ALGEBRA_LIMIT: usize = 36;
/// Largest dense bimodule handed to the generic `HH₀` solver.
pub const DENSE_BIMODULE_LIMIT: usize = 144;

/// Fixed point `(ρ_x, h⁻¹)` of a diagonal basis element `(x, v, h)`.
pub fn fixed_point_of(s: &Scenario, b: HeckeBasis) -> Result<usize> {
    let c = s.char_groupoid();
    let o = FixedObject { rho: c.homs()[b.x].clone(), g: s.group.inv(b.h) };
    s.fixed()
        .index_of(&o)
        .ok_or_else(|| Error::PipelineDisagreement(format!("diagonal element at object {} is not a fixed point", b.x)))
}

/// The generic `HH₀` of the dense bimodule and its identification with the structured one.
#[derive(Clone, Debug)]
pub struct DenseHH {
    pub bimodule: Bimodule,
    pub hh: HHSpace,
    /// Dense classes to structured classes.
    pub matching: FieldMatrix,
}

/// `HH₀(A, B_{V,f})` for `V = legs ⊗ (model slot)`, identified with the invariant sections
/// of the bundle `V` on the fixed locus. Operators are reported in the section basis.
#[derive(Clone, Debug)]
pub struct TraceSpace {
    pub legs: Vec<Representation>,
    pub hh: StructuredHH,
    pub sections: SectionSpace,
    pub comparison: FieldMatrix,
    pub comparison_inv: FieldMatrix,
    pub dense: Option<DenseHH>,
}

/// With legs the space is the legged variant; without, the plain trace.
pub type LeggedSpace = TraceSpace;

/// Slots of the bimodule: the legs followed by the model's own slot.
pub fn model_slots(s: &Scenario, legs: &[Representation]) -> Vec<Representation> {
    let mut slots = legs.to_vec();
    slots.extend(s.model.slot().cloned());
    slots
}

pub fn trace_space(s: &Scenario) -> Result<TraceSpace> {
    legged_space(s, &[])
}

pub fn legged_space(s: &Scenario, legs: &[Representation]) -> Result<TraceSpace> {
    let fixed = s.fixed();
    let slots = model_slots(s, legs);
    let hh = StructuredHH::new(fixed, &s.ctx, &slots)?;
    let sec = sections(&bundle_from_rep(fixed.as_ref(), &slots, &s.ctx)?)?;
    let (comparison, comparison_inv) = hh.comparison(fixed, &sec)?;
    let q = HeckeBimodule::new(s.char_groupoid(), &s.ctx, slots, s.frobenius_map().to_vec())?;
    let dense = if s.algebra_dim() <= DENSE_ALGEBRA_LIMIT && q.dim() <= DENSE_BIMODULE_LIMIT {
        Some(dense_hh(s, &q, &hh)?)
    } else {
        None
    };
    Ok(TraceSpace { legs: legs.to_vec(), hh, sections: sec, comparison, comparison_inv, dense })
}

/// Restrict a dense `HH₀(A, Q)` class to the diagonal; checked to descend and be invertible.
fn dense_hh(s: &Scenario, q: &HeckeBimodule, hh: &StructuredHH) -> Result<DenseHH> {
    let bimodule = q.to_dense(s.algebra())?;
    let dense_hh = hh0(&bimodule)?;
    let to_structured = |raw: &[CycNumber]| -> Result<Vector> {
        let mut out = vec![CycNumber::zero(&s.ctx); hh.dim()];
        for (idx, c) in raw.iter().enumerate() {
            let b = q.basis(idx);
            if c.is_zero() || !q.is_diagonal(b) {
                continue;
            }
            let p = fixed_point_of(s, b)?;
            let class = hh.class_at(s.fixed(), p, &vec_scale(&unit_vector(&s.ctx, q.fiber_dim(), b.v), c));
            for (o, x) in out.iter_mut().zip(class) {
                *o += &x;
            }
        }
        Ok(out)
    };
    for r in dense_hh.quotient.relations().basis() {
        if !vec_is_zero(&to_structured(r)?) {
            return Err(Error::PipelineDisagreement("diagonal restriction does not descend to HH₀".into()));
        }
    }
    let k = dense_hh.dim();
    let cols = (0..k)
        .map(|i| to_structured(&dense_hh.lift(&unit_vector(&s.ctx, k, i))))
        .collect::<Result<Vec<_>>>()?;
    let matching = FieldMatrix::from_columns(&s.ctx, hh.dim(), &cols);
    if !matching.is_square() || matching.inverse().is_none() {
        return Err(Error::PipelineDisagreement(format!(
            "dense HH₀ has dimension {k}, structured HH₀ has dimension {}",
            hh.dim()
        )));
    }
    Ok(DenseHH { bimodule, hh: dense_hh, matching })
}

impl TraceSpace {
    pub fn dim(&self) -> usize {
        self.hh.dim()
    }

    pub fn slots(&self) -> &[Representation] {
        self.hh.slots()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.hh.block_dims()
    }

    /// `C M C⁻¹`: an operator on `HH₀` in the section basis.
    pub fn to_block_basis(&self, m: &FieldMatrix) -> Result<FieldMatrix> {
        self.comparison.mat_mul(m)?.mat_mul(&self.comparison_inv)
    }

    /// Block-diagonal operator acting on the invariants at each orbit representative
    /// by `f(rep)`, which must preserve them.
    pub fn fiberwise(&self, s: &Scenario, f: impl Fn(&FixedObject) -> Result<FieldMatrix>) -> Result<FieldMatrix> {
        let fixed = s.fixed();
        let mut out = FieldMatrix::zeros(&s.ctx, self.dim(), self.dim());
        for b in 0..fixed.orbit_count() {
            let basis = &self.sections.per_orbit[b];
            let bm = FieldMatrix::from_columns(&s.ctx, self.hh.fiber_dim(), basis);
            let m = f(fixed.representative(b))?;
            let start = self.hh.block_range(b).start;
            for (j, v) in basis.iter().enumerate() {
                let coords = bm.solve_linear(&m.apply(v)?)?.ok_or_else(|| {
                    Error::PipelineDisagreement(format!("operator does not preserve the invariants on orbit {b}"))
                })?;
                for (i, c) in coords.into_iter().enumerate() {
                    out.set(start + i, start + j, c);
                }
            }
        }
        Ok(out)
    }

    /// Diagonal operator with one scalar per orbit.
    pub fn block_scalars(&self, s: &Scenario, scalars: &[CycNumber]) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&s.ctx, self.dim(), self.dim());
        for (b, c) in scalars.iter().enumerate() {
            for i in self.hh.block_range(b) {
                out.set(i, i, c.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space_of(name: &str) -> (Scenario, TraceSpace) {
        let s = Scenario::builtin(name).unwrap();
        let t = trace_space(&s).unwrap();
        (s, t)
    }

    #[test]
    fn trace_dimension_counts_orbits_for_the_regular_model() {
        for name in ["z3-frobenius", "s3-inertia", "z4-circle", "f2-swap"] {
            let (s, t) = space_of(name);
            assert_eq!(t.dim(), s.fixed().orbit_count(), "{name}");
            assert!(t.block_dims().iter().all(|&d| d == 1), "{name}");
        }
    }

    #[test]
    fn dense_hh_matches_structured_hh_on_small_scenarios() {
        for name in ["z3-frobenius", "s3-inertia", "z4-circle"] {
            let (_, t) = space_of(name);
            let d = t.dense.as_ref().unwrap_or_else(|| panic!("{name} should be small enough"));
            assert_eq!(d.hh.dim(), t.dim());
        }
        let (_, t) = space_of("f2-swap");
        assert!(t.dense.is_none());
    }

    #[test]
    fn legged_dimensions_are_invariant_counts() {
        let s = Scenario::builtin("s3-inertia").unwrap();
        let std = s.rep("std").unwrap().clone();
        let t = legged_space(&s, &[std.clone(), std]).unwrap();
        assert!(t.dense.is_some());
        // centralizers S3, Z2, Z3 fix 1, 2, 2 dimensions of std ⊗ std
        let mut dims = t.block_dims();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2]);
        assert_eq!(t.sections.orbit_dims(), t.block_dims());
    }

    #[test]
    fn bundle_model_adds_its_slot() {
        let (s, t) = space_of("s3-bundle");
        assert_eq!(t.slots().len(), 1);
        assert_eq!(t.dim(), t.sections.dim());
        assert!(t.dim() > s.fixed().orbit_count());
    }
}
