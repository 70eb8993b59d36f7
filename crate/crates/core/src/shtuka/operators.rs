use std::fmt;

use serde::Serialize;

use crate::charstack::{loop_image, FixedObject};
use crate::error::{Error, Result};
use crate::exactfield::{kron_apply, CycNumber, FieldMatrix, Vector};
use crate::excursion::{evaluate_excursion, xi_from_rep, ExcursionDatum};
use crate::groups::Word;
use crate::reptheory::Representation;

use super::fiber::{apply_slot, contract_front, identity_tensor, insert, move_slot};
use super::hh::StructuredHH;
use super::scenario::Scenario;
use super::space::TraceSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    S { rep: String },
    T { rep: String },
    PartialFrobenius { leg: usize },
    Monodromy,
    ExcursionAction,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::S { rep } => write!(f, "S({rep})"),
            Provenance::T { rep } => write!(f, "T({rep})"),
            Provenance::PartialFrobenius { leg } => write!(f, "partial-frobenius({leg})"),
            Provenance::Monodromy => write!(f, "monodromy"),
            Provenance::ExcursionAction => write!(f, "excursion-action"),
        }
    }
}

/// An operator on a trace space, in its section basis.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: FieldMatrix,
    pub provenance: Provenance,
}

impl OperatorMatrix {
    pub fn new(space: &TraceSpace, matrix: FieldMatrix, provenance: Provenance) -> Result<Self> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{provenance} is {}x{} on a space of dimension {}",
                matrix.rows(),
                matrix.cols(),
                space.dim()
            )));
        }
        Ok(OperatorMatrix { matrix, provenance })
    }

    /// Diagonal entries, one per basis vector.
    pub fn diagonal(&self) -> Vec<CycNumber> {
        (0..self.matrix.rows()).map(|i| self.matrix.get(i, i).clone()).collect()
    }
}

/// One stage of a composite: its matrix between consecutive `HH₀` spaces.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub matrix: FieldMatrix,
}

/// A composite of stages, on `HH₀` coordinates and in the section basis.
#[derive(Clone, Debug)]
pub struct Composite {
    pub stages: Vec<Stage>,
    pub hh_matrix: FieldMatrix,
    pub operator: OperatorMatrix,
}

type StageFn<'a> = Box<dyn Fn(&FixedObject, &[CycNumber]) -> Result<Vector> + 'a>;

struct StageSpec<'a> {
    name: &'static str,
    slots: Vec<Representation>,
    map: StageFn<'a>,
}

fn run(s: &Scenario, space: &TraceSpace, specs: Vec<StageSpec<'_>>, provenance: Provenance) -> Result<Composite> {
    let fixed = s.fixed();
    let mut stages = Vec::with_capacity(specs.len());
    let mut acc = FieldMatrix::identity(&s.ctx, space.dim());
    let mut current: Option<StructuredHH> = None;
    for spec in specs {
        let dst = StructuredHH::new(fixed, &s.ctx, &spec.slots)?;
        let src = current.as_ref().unwrap_or(&space.hh);
        let m = src.descend(&dst, fixed, spec.name, spec.map)?;
        acc = m.mat_mul(&acc).map_err(|_| Error::DimensionMismatch(format!("stage {} does not compose", spec.name)))?;
        stages.push(Stage { name: spec.name, matrix: m });
        current = Some(dst);
    }
    let last = current.as_ref().unwrap_or(&space.hh);
    if last.slot_dims() != space.hh.slot_dims() || last.block_dims() != space.hh.block_dims() {
        return Err(Error::DimensionMismatch(format!("{provenance} does not return to its carrier")));
    }
    let operator = OperatorMatrix::new(space, space.to_block_basis(&acc)?, provenance)?;
    Ok(Composite { stages, hh_matrix: acc, operator })
}

fn slot_dims(slots: &[Representation]) -> Vec<usize> {
    slots.iter().map(Representation::dim).collect()
}

fn concat(parts: &[&[Representation]]) -> Vec<Representation> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn identity_stage<'a>() -> StageFn<'a> {
    Box::new(|_, x| Ok(x.to_vec()))
}

/// `T_a`: unit `Tr(F) → Tr(H_{a^∨} H_a F)`, cyclicity moving `H_{a^∨}` to the back,
/// the tautological commutation, and evaluation `a ⊗ a^∨ → 1`.
pub fn t_composite(s: &Scenario, space: &TraceSpace, a: &Representation, name: &str) -> Result<Composite> {
    let v = space.slots();
    let ad = a.dual();
    let da = a.dim();
    let vd = slot_dims(v);
    let n = v.len();
    let coev = identity_tensor(&s.ctx, da);
    let g = s.group.clone();
    let with_unit = concat(&[&[ad.clone(), a.clone()], v]);
    let cycled = concat(&[std::slice::from_ref(a), v, std::slice::from_ref(&ad)]);
    let unit_dims = slot_dims(&with_unit);
    let cyc_dims = slot_dims(&cycled);
    let specs = vec![
        StageSpec { name: "unit", slots: with_unit, map: Box::new(move |_, x| insert(x, &vd, 0, &coev, &[da, da])) },
        StageSpec {
            name: "cyclicity",
            slots: cycled.clone(),
            map: Box::new({
                let ad = ad.clone();
                let g = g.clone();
                move |o, x| {
                    let (y, dims) = move_slot(x, &unit_dims, 0, n + 1)?;
                    apply_slot(&y, &dims, n + 1, ad.matrix(g.inv(o.g)))
                }
            }),
        },
        StageSpec { name: "tautological", slots: cycled, map: identity_stage() },
        StageSpec {
            name: "evaluation",
            slots: v.to_vec(),
            map: Box::new(move |_, x| {
                let (y, dims) = move_slot(x, &cyc_dims, n + 1, 1)?;
                contract_front(&y, &dims, 2, &identity_tensor(a.ctx(), da))
            }),
        },
    ];
    run(s, space, specs, Provenance::T { rep: name.to_string() })
}

pub fn t_operator(s: &Scenario, space: &TraceSpace, a: &Representation, name: &str) -> Result<OperatorMatrix> {
    Ok(t_composite(s, space, a, name)?.operator)
}

/// Insert `v` over the datum's slots, split legs, apply `⊗_j r_j(σ(γ_j))`, pair with `v*`.
pub fn excursion_composite(s: &Scenario, space: &TraceSpace, d: &ExcursionDatum, provenance: Provenance) -> Result<Composite> {
    let v = space.slots();
    let reps = d.xi.reps();
    let rd = slot_dims(reps);
    let vd = slot_dims(v);
    let k = reps.len();
    let inserted = concat(&[reps, v]);
    let all_dims = slot_dims(&inserted);
    let ids: Vec<FieldMatrix> = vd.iter().map(|&m| FieldMatrix::identity(&s.ctx, m)).collect();
    let g = s.group.clone();
    let specs = vec![
        StageSpec { name: "insert", slots: inserted.clone(), map: Box::new(move |_, x| insert(x, &vd, 0, d.xi.v(), &rd)) },
        StageSpec { name: "split", slots: inserted.clone(), map: identity_stage() },
        StageSpec {
            name: "monodromy",
            slots: inserted,
            map: Box::new(move |o, x| {
                let elems = d.loops.iter().map(|w| loop_image(o, w, &g)).collect::<Result<Vec<_>>>()?;
                let mut mats: Vec<&FieldMatrix> = reps.iter().zip(&elems).map(|(r, &e)| r.matrix(e)).collect();
                mats.extend(ids.iter());
                kron_apply(&mats, x)
            }),
        },
        StageSpec {
            name: "counit",
            slots: v.to_vec(),
            map: Box::new(move |_, x| contract_front(x, &all_dims, k, d.xi.vstar())),
        },
    ];
    run(s, space, specs, provenance)
}

/// Scalar multiplication by the excursion function on each block.
pub fn excursion_block(s: &Scenario, space: &TraceSpace, d: &ExcursionDatum) -> Result<(Vec<CycNumber>, FieldMatrix)> {
    let values = evaluate_excursion(d, s.fixed())?.values;
    let m = space.block_scalars(s, &values);
    Ok((values, m))
}

/// `S_a` both as the excursion composite for `(ξ_a, (t, e))` and in block form; they must agree.
#[derive(Clone, Debug)]
pub struct SOperator {
    pub composite: Composite,
    pub block: OperatorMatrix,
    pub scalars: Vec<CycNumber>,
}

pub fn s_datum(s: &Scenario, a: &Representation) -> Result<ExcursionDatum> {
    ExcursionDatum::new(xi_from_rep(a)?, vec![s.frobenius_loop(), Word::empty()])
}

pub fn s_operator(s: &Scenario, space: &TraceSpace, a: &Representation, name: &str) -> Result<SOperator> {
    let d = s_datum(s, a)?;
    let provenance = Provenance::S { rep: name.to_string() };
    let composite = excursion_composite(s, space, &d, provenance.clone())?;
    let (scalars, m) = excursion_block(s, space, &d)?;
    let block = OperatorMatrix::new(space, m, provenance)?;
    if composite.operator.matrix != block.matrix {
        return Err(Error::PipelineDisagreement(format!("S({name}) composite differs from its block form")));
    }
    Ok(SOperator { composite, block, scalars })
}

/// The excursion-action operator of `d` as a composite, asserted equal to its block form.
pub fn excursion_operator(s: &Scenario, space: &TraceSpace, d: &ExcursionDatum) -> Result<(OperatorMatrix, Vec<CycNumber>)> {
    let composite = excursion_composite(s, space, d, Provenance::ExcursionAction)?;
    let (values, m) = excursion_block(s, space, d)?;
    if composite.operator.matrix != m {
        return Err(Error::PipelineDisagreement("excursion composite differs from its block form".into()));
    }
    Ok((composite.operator, values))
}

/// `⊗_j m_j` with `m_i = r_i(g)` and identities elsewhere.
fn slot_matrix(s: &Scenario, slots: &[Representation], pick: impl Fn(usize) -> Option<usize>) -> FieldMatrix {
    slots.iter().enumerate().fold(FieldMatrix::identity(&s.ctx, 1), |acc, (j, r)| {
        let m = match pick(j) {
            Some(e) => r.matrix(e).clone(),
            None => FieldMatrix::identity(&s.ctx, r.dim()),
        };
        acc.mat_kron(&m).expect("kron")
    })
}

/// Partial Frobenius at leg `i`: the inverse of braiding leg `i` to the front, moving it
/// around by cyclicity, the tautological commutation and braiding it back.
/// Asserted equal to `r_i(σ(t))` on factor `i` restricted to the invariants.
pub fn partial_frobenius_composite(s: &Scenario, space: &TraceSpace, i: usize) -> Result<(Composite, OperatorMatrix)> {
    if i >= space.legs.len() {
        return Err(Error::DimensionMismatch(format!("leg {i} out of range for {} legs", space.legs.len())));
    }
    let v = space.slots();
    let n = v.len();
    let r = v[i].clone();
    let mut rest = v.to_vec();
    rest.remove(i);
    let front = concat(&[std::slice::from_ref(&r), &rest]);
    let back = concat(&[&rest, std::slice::from_ref(&r)]);
    let (vd, fd, bd) = (slot_dims(v), slot_dims(&front), slot_dims(&back));
    let g = s.group.clone();
    let specs = vec![
        StageSpec { name: "braid", slots: front, map: Box::new(move |_, x| Ok(move_slot(x, &vd, i, 0)?.0)) },
        StageSpec {
            name: "cyclicity",
            slots: back.clone(),
            map: Box::new({
                let r = r.clone();
                move |o, x| {
                    let (y, dims) = move_slot(x, &fd, 0, n - 1)?;
                    apply_slot(&y, &dims, n - 1, r.matrix(g.inv(o.g)))
                }
            }),
        },
        StageSpec { name: "tautological", slots: back, map: identity_stage() },
        StageSpec { name: "braid back", slots: v.to_vec(), map: Box::new(move |_, x| Ok(move_slot(x, &bd, n - 1, i)?.0)) },
    ];
    let composite = run(s, space, specs, Provenance::PartialFrobenius { leg: i })?;
    let inverse = composite
        .operator
        .matrix
        .inverse()
        .ok_or_else(|| Error::PipelineDisagreement(format!("partial Frobenius composite at leg {i} is singular")))?;
    let block = space.fiberwise(s, |o| Ok(slot_matrix(s, v, |j| (j == i).then_some(o.g))))?;
    if inverse != block {
        return Err(Error::PipelineDisagreement(format!("partial Frobenius at leg {i} differs from its block form")));
    }
    Ok((composite, OperatorMatrix::new(space, inverse, Provenance::PartialFrobenius { leg: i })?))
}

pub fn partial_frobenius(s: &Scenario, space: &TraceSpace, i: usize) -> Result<OperatorMatrix> {
    Ok(partial_frobenius_composite(s, space, i)?.1)
}

/// `σ(t)` acting diagonally on all legs, identity on the model slot, restricted to the invariants.
pub fn global_monodromy(s: &Scenario, space: &TraceSpace) -> Result<OperatorMatrix> {
    let legs = space.legs.len();
    let m = space.fiberwise(s, |o| Ok(slot_matrix(s, space.slots(), |j| (j < legs).then_some(o.g))))?;
    OperatorMatrix::new(space, m, Provenance::Monodromy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::parse_cyc;
    use crate::shtuka::space::{legged_space, trace_space};

    fn chi_at_reps(s: &Scenario, a: &Representation) -> Vec<CycNumber> {
        let ch = a.character();
        (0..s.fixed().orbit_count()).map(|b| ch.at(s.fixed().representative(b).g).clone()).collect()
    }

    #[test]
    fn t_of_trivial_is_identity() {
        for name in ["z3-frobenius", "s3-inertia", "s3-bundle"] {
            let s = Scenario::builtin(name).unwrap();
            let t = trace_space(&s).unwrap();
            let triv = s.reps[0].1.clone();
            assert!(t_operator(&s, &t, &triv, "trivial").unwrap().matrix.is_identity(), "{name}");
        }
    }

    #[test]
    fn z3_t_is_diagonal_in_powers_of_zeta() {
        let s = Scenario::builtin("z3-frobenius").unwrap();
        let t = trace_space(&s).unwrap();
        let op = t_operator(&s, &t, s.rep("chi1").unwrap(), "chi1").unwrap();
        let expected: Vec<CycNumber> =
            ["1", "zeta(3)", "zeta(3)^2"].iter().map(|x| parse_cyc(&s.ctx, x).unwrap()).collect();
        assert_eq!(op.diagonal(), expected);
        assert_eq!(op.matrix, t.block_scalars(&s, &expected));
    }

    #[test]
    fn s_equals_t_and_both_are_characters() {
        for name in ["z3-frobenius", "s3-inertia", "z4-circle", "s3-bundle"] {
            let s = Scenario::builtin(name).unwrap();
            let t = trace_space(&s).unwrap();
            for (rn, a) in &s.reps {
                let top = t_operator(&s, &t, a, rn).unwrap();
                let sop = s_operator(&s, &t, a, rn).unwrap();
                assert_eq!(top.matrix, sop.block.matrix, "{name} {rn}");
                assert_eq!(sop.scalars, chi_at_reps(&s, a), "{name} {rn}");
            }
        }
    }

    #[test]
    fn s3_std_scalars_per_class() {
        let s = Scenario::builtin("s3-inertia").unwrap();
        let t = trace_space(&s).unwrap();
        let mut got: Vec<String> =
            s_operator(&s, &t, s.rep("std").unwrap(), "std").unwrap().scalars.iter().map(|c| c.pretty()).collect();
        got.sort();
        assert_eq!(got, vec!["-1", "0", "2"]);
    }

    #[test]
    fn partial_frobenius_matches_leg_monodromy() {
        let s = Scenario::builtin("s3-inertia").unwrap();
        let legs = vec![s.rep("std").unwrap().clone(), s.rep("sign").unwrap().clone()];
        let t = legged_space(&s, &legs).unwrap();
        let f0 = partial_frobenius(&s, &t, 0).unwrap();
        let f1 = partial_frobenius(&s, &t, 1).unwrap();
        let global = global_monodromy(&s, &t).unwrap();
        assert_eq!(f0.matrix.mat_mul(&f1.matrix).unwrap(), global.matrix);
        assert_eq!(f1.matrix.mat_mul(&f0.matrix).unwrap(), global.matrix);
        assert!(partial_frobenius(&s, &t, 2).is_err());
    }

    #[test]
    fn z3_partial_frobenius_on_two_legs() {
        let s = Scenario::builtin("z3-frobenius").unwrap();
        let legs = vec![s.rep("chi1").unwrap().clone(), s.rep("chi2").unwrap().clone()];
        let t = legged_space(&s, &legs).unwrap();
        assert_eq!(t.dim(), 3);
        let f = partial_frobenius(&s, &t, 0).unwrap();
        let expected: Vec<CycNumber> =
            ["1", "zeta(3)", "zeta(3)^2"].iter().map(|x| parse_cyc(&s.ctx, x).unwrap()).collect();
        assert_eq!(f.diagonal(), expected);
    }

    #[test]
    fn trivial_leg_gives_identity_frobenius() {
        let s = Scenario::builtin("f2-swap").unwrap();
        let t = legged_space(&s, &[s.reps[0].1.clone()]).unwrap();
        assert!(partial_frobenius(&s, &t, 0).unwrap().matrix.is_identity());
    }
}
