//! Cross-checks of the structured computations against the generic bimodule calculus.
//! Only run where the dense tensor products stay small.

use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, CycNumber, FieldMatrix};
use crate::reptheory::Representation;
use crate::tracecalc::{bimodule_tensor, cyclicity_iso};

use super::fiber::{contract_front, move_slot};
use super::hecke::{normal_form_map, raw_normal_form, HeckeBasis, HeckeBimodule};
use super::scenario::Scenario;
use super::space::{fixed_point_of, TraceSpace, DENSE_ALGEBRA_LIMIT};

/// Largest raw space `Had ⊗ (Ha ⊗ Q)` for the dense `T` cross-check.
pub const DENSE_RAW_LIMIT: usize = 1024;

/// `T_a` on the dense `HH₀(A, Q)`, computed through the generic cyclicity iso for
/// `Q_{a^∨} ⊗ (Q_a ⊗ Q)`; `None` when too large.
pub fn dense_t_operator(s: &Scenario, space: &TraceSpace, a: &Representation) -> Result<Option<FieldMatrix>> {
    let Some(dense) = &space.dense else { return Ok(None) };
    let base = s.char_groupoid();
    let q = HeckeBimodule::new(base, &s.ctx, space.slots().to_vec(), s.frobenius_map().to_vec())?;
    let ha = HeckeBimodule::hecke(base, a)?;
    let had = HeckeBimodule::hecke(base, &a.dual())?;
    let t1_dim = ha.compose(&q)?.dim();
    if had.dim() * t1_dim > DENSE_RAW_LIMIT || ha.dim() * q.dim() > DENSE_RAW_LIMIT {
        return Ok(None);
    }
    let alg = s.algebra();
    let (ha_d, had_d) = (ha.to_dense(alg)?, had.to_dense(alg)?);
    let t1 = bimodule_tensor(&ha_d, &dense.bimodule)?;
    let iso = cyclicity_iso(&had_d, &t1.bimodule)?;
    let ctx = &s.ctx;
    let e = s.group.identity();
    let da = a.dim();

    // unit: q ↦ Σ_i (y, e_i^∨, e) ⊗ (y, e_i, e) ⊗ q with y the target of q
    let k = dense.hh.dim();
    let n_t1 = t1.bimodule.dim();
    let mut unit_cols = Vec::with_capacity(k);
    for c in 0..k {
        let qraw = dense.hh.lift(&unit_vector(ctx, k, c));
        let mut outer = vec![CycNumber::zero(ctx); had.dim() * n_t1];
        for (idx, coeff) in qraw.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let y = q.target(q.basis(idx));
            for i in 0..da {
                let mut inner_raw = vec![CycNumber::zero(ctx); ha.dim() * q.dim()];
                inner_raw[ha.index(HeckeBasis { x: y, v: i, h: e }) * q.dim() + idx] = coeff.clone();
                let inner = t1.quotient.project(&inner_raw);
                let row = had.index(HeckeBasis { x: y, v: i, h: e });
                for (j, c2) in inner.iter().enumerate() {
                    if !c2.is_zero() {
                        outer[row * n_t1 + j] += c2;
                    }
                }
            }
        }
        unit_cols.push(iso.hh_qp.project(&iso.qp.quotient.project(&outer)));
    }
    let unit = FieldMatrix::from_columns(ctx, iso.hh_qp.dim(), &unit_cols);

    // evaluation: (t1 ⊗ Had) → B_{a⊗V⊗a^∨, f} → diagonal → contract a with a^∨
    let comp_av = ha.compose(&q)?;
    let comp_full = comp_av.compose(&had)?;
    let nf: Vec<Vec<CycNumber>> = (0..n_t1)
        .map(|j| raw_normal_form(&ha, &q, &comp_av, &t1.quotient.lift(&unit_vector(ctx, n_t1, j)), q.dim()))
        .collect::<Result<_>>()?;
    let mut full_dims = vec![da];
    full_dims.extend(space.slots().iter().map(Representation::dim));
    full_dims.push(da);
    let last = full_dims.len() - 1;
    let ev = super::fiber::identity_tensor(ctx, da);
    let hh = &space.hh;
    let kk = iso.hh_pq.dim();
    let mut eval_cols = Vec::with_capacity(kk);
    for d in 0..kk {
        let raw = iso.pq.quotient.lift(&iso.hh_pq.lift(&unit_vector(ctx, kk, d)));
        let mut out = vec![CycNumber::zero(ctx); hh.dim()];
        for (idx, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, b3) = (idx / had.dim(), had.basis(idx % had.dim()));
            for (m, c2) in nf[j].iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                let Some((b, fiber)) = comp_av.tensor_basis(&had, comp_av.basis(m), b3) else { continue };
                if !comp_full.is_diagonal(b) {
                    continue;
                }
                let p = fixed_point_of(s, b)?;
                let scaled: Vec<CycNumber> = fiber.iter().map(|f| &(f * c) * c2).collect();
                let (moved, dims) = move_slot(&scaled, &full_dims, last, 1)?;
                let v = contract_front(&moved, &dims, 2, &ev)?;
                for (o, x) in out.iter_mut().zip(hh.class_at(s.fixed(), p, &v)) {
                    *o += &x;
                }
            }
        }
        eval_cols.push(out);
    }
    let eval = FieldMatrix::from_columns(ctx, hh.dim(), &eval_cols);
    Ok(Some(eval.mat_mul(&iso.forward)?.mat_mul(&unit)?))
}

/// The commutation iso `Q_r ⊗_A Q_F ≅ Q_F ⊗_A Q_r` in dense coordinates, assembled from
/// the normal forms of both sides (identity on fibers).
#[derive(Clone, Debug)]
pub struct CommutationIso {
    pub dim: usize,
    pub iso: FieldMatrix,
}

pub fn commutation_iso(s: &Scenario, r: &Representation) -> Result<Option<CommutationIso>> {
    let base = s.char_groupoid();
    let qr = HeckeBimodule::hecke(base, r)?;
    let qf = HeckeBimodule::new(base, &s.ctx, Vec::new(), s.frobenius_map().to_vec())?;
    if s.algebra_dim() > DENSE_ALGEBRA_LIMIT || qr.dim() * qf.dim() > DENSE_RAW_LIMIT {
        return Ok(None);
    }
    let alg = s.algebra();
    let (qr_d, qf_d) = (qr.to_dense(alg)?, qf.to_dense(alg)?);
    let (rf, fr) = (qr.compose(&qf)?, qf.compose(&qr)?);
    let (rf_d, fr_d) = (rf.to_dense(alg)?, fr.to_dense(alg)?);
    for i in 0..alg.dim() {
        if rf_d.left_basis(i) != fr_d.left_basis(i) || rf_d.right_basis(i) != fr_d.right_basis(i) {
            return Err(Error::CheckFailed("composites differ as bimodules".into()));
        }
    }
    let t1 = bimodule_tensor(&qr_d, &qf_d)?;
    let t2 = bimodule_tensor(&qf_d, &qr_d)?;
    let n1 = normal_form_map(&qr, &qf, &t1, &rf_d)?;
    let n2 = normal_form_map(&qf, &qr, &t2, &fr_d)?;
    let n2_inv = n2.inverse().ok_or_else(|| Error::CheckFailed("normal form is singular".into()))?;
    let iso = n2_inv.mat_mul(&n1)?;
    // bimodule map: intertwines both actions
    for i in 0..alg.dim() {
        let l = iso.mat_mul(t1.bimodule.left_basis(i))?.mat_sub(&t2.bimodule.left_basis(i).mat_mul(&iso)?)?;
        let rr = iso.mat_mul(t1.bimodule.right_basis(i))?.mat_sub(&t2.bimodule.right_basis(i).mat_mul(&iso)?)?;
        if !l.is_zero() || !rr.is_zero() {
            return Err(Error::CheckFailed(format!("commutation iso is not a bimodule map at basis {i}")));
        }
    }
    Ok(Some(CommutationIso { dim: iso.rows(), iso }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shtuka::operators::t_composite;
    use crate::shtuka::space::{legged_space, trace_space};

    #[test]
    fn dense_t_agrees_with_structured_t() {
        for name in ["z3-frobenius", "s3-inertia"] {
            let s = Scenario::builtin(name).unwrap();
            let t = trace_space(&s).unwrap();
            let matching = &t.dense.as_ref().unwrap().matching;
            for (rn, a) in &s.reps {
                let dense = dense_t_operator(&s, &t, a).unwrap().expect("small");
                let structured = t_composite(&s, &t, a, rn).unwrap().hh_matrix;
                assert_eq!(structured.mat_mul(matching).unwrap(), dense, "{name} {rn}");
            }
        }
    }

    #[test]
    fn dense_t_agrees_with_legs() {
        let s = Scenario::builtin("s3-inertia").unwrap();
        let std = s.rep("std").unwrap().clone();
        let t = legged_space(&s, &[std.clone()]).unwrap();
        let matching = &t.dense.as_ref().unwrap().matching;
        let sign = s.rep("sign").unwrap();
        let dense = dense_t_operator(&s, &t, sign).unwrap().expect("small");
        let structured = t_composite(&s, &t, sign, "sign").unwrap().hh_matrix;
        assert_eq!(structured.mat_mul(matching).unwrap(), dense);
    }

    #[test]
    fn commutation_iso_is_a_bimodule_iso() {
        let s = Scenario::builtin("s3-inertia").unwrap();
        for (_, r) in &s.reps {
            let c = commutation_iso(&s, r).unwrap().expect("small");
            assert!(c.iso.inverse().is_some());
        }
        let z = Scenario::builtin("z3-frobenius").unwrap();
        let c = commutation_iso(&z, z.rep("chi1").unwrap()).unwrap().expect("small");
        assert_eq!(c.dim, 9);
        // trivial rep: Q_r is the regular bimodule
        let triv = HeckeBimodule::hecke(z.char_groupoid(), z.rep("chi0").unwrap()).unwrap();
        let dense = triv.to_dense(z.algebra()).unwrap();
        let regular = crate::tracecalc::Bimodule::regular(z.algebra());
        for i in 0..z.algebra_dim() {
            assert_eq!(dense.left_basis(i), regular.left_basis(i));
            assert_eq!(dense.right_basis(i), regular.right_basis(i));
        }
        assert!(commutation_iso(&z, z.rep("chi0").unwrap()).unwrap().is_some());
    }
}
