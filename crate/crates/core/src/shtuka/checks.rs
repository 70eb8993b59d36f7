//! The identity checks, each producing one [`CheckResult`].

use num_rational::BigRational;

use crate::charstack::{fixed_groupoid_torus_with, loop_image, match_fixed_descriptions};
use crate::error::{Error, Result};
use crate::exactfield::{CycNumber, FieldMatrix};
use crate::excursion::{evaluate_excursion, excursion_algebra_span, ExcursionDatum};
use crate::groups::{EnumerateOptions, Word};
use crate::reptheory::Representation;
use crate::tracecalc::{hattori_stallings, ProjectiveModuleData};

use super::dense::{commutation_iso, dense_t_operator};
use super::operators::{
    excursion_operator, global_monodromy, partial_frobenius, s_operator, t_composite, t_operator,
};
use super::report::{run_check, CheckBuilder, CheckResult};
use super::scenario::{ModuleModel, Scenario};
use super::space::{legged_space, TraceSpace};

/// Largest group for which the Chern check builds `K[G]` densely.
pub const CHERN_GROUP_LIMIT: usize = 24;

fn leg_label(legs: &[(String, Representation)]) -> String {
    if legs.is_empty() {
        "no legs".into()
    } else {
        legs.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(",")
    }
}

fn leg_reps(legs: &[(String, Representation)]) -> Vec<Representation> {
    legs.iter().map(|(_, r)| r.clone()).collect()
}

fn dims_text(d: &[usize]) -> String {
    format!("{d:?}")
}

/// `χ_a(σ(t))` at each orbit representative.
pub fn character_oracle(s: &Scenario, a: &Representation) -> Vec<CycNumber> {
    let ch = a.character();
    (0..s.fixed().orbit_count()).map(|b| ch.at(s.fixed().representative(b).g).clone()).collect()
}

fn is_block_diagonal(space: &TraceSpace, m: &FieldMatrix) -> bool {
    let ranges: Vec<_> = (0..space.hh.blocks().len()).map(|b| space.hh.block_range(b)).collect();
    let block_of = |i: usize| ranges.iter().position(|r| r.contains(&i));
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| block_of(i) == block_of(j) || m.get(i, j).is_zero()))
}

/// Both pipelines for the (legged) trace space and their comparison iso.
pub fn check_trace_space(s: &Scenario, legs: &[(String, Representation)]) -> CheckResult {
    run_check(format!("two-trace agreement [{}; {}]", s.model.label(), leg_label(legs)), |b| {
        let space = legged_space(s, &leg_reps(legs))?;
        b.text("dimension", space.dim().to_string());
        b.text("block dims", dims_text(&space.block_dims()));
        b.expect(space.block_dims() == space.sections.orbit_dims(), || "block dimensions differ".into());
        b.expect(is_block_diagonal(&space, &space.comparison), || "comparison iso is not block-diagonal".into());
        b.expect(space.comparison.mat_mul(&space.comparison_inv)?.is_identity(), || "comparison iso is not invertible".into());
        match &space.dense {
            Some(d) => {
                b.text("dense HH₀ dimension", d.hh.dim().to_string());
                b.expect(d.hh.dim() == space.dim(), || "dense HH₀ dimension differs".into());
            }
            None => b.note("dense bimodule too large; orbitwise HH₀ only"),
        }
        Ok(())
    })
}

fn st_on(b: &mut CheckBuilder, s: &Scenario, space: &TraceSpace, name: &str, a: &Representation, tag: &str) -> Result<()> {
    let t = t_composite(s, space, a, name)?;
    let sop = s_operator(s, space, a, name)?;
    b.matrix(format!("T{tag}"), &t.operator.matrix);
    b.matrix(format!("S{tag}"), &sop.block.matrix);
    b.vector(format!("block scalars{tag}"), &sop.scalars);
    b.expect(t.operator.matrix == sop.block.matrix, || format!("S ≠ T{tag}"));
    b.expect(sop.composite.operator.matrix == sop.block.matrix, || format!("abstract S ≠ block S{tag}"));
    // T is multiplication by χ_a(σ(t)) on every block, whatever the fiber
    let oracle = space.block_scalars(s, &character_oracle(s, a));
    b.expect(t.operator.matrix == oracle, || format!("T{tag} differs from the character oracle"));
    if let Some(dense) = dense_t_operator(s, space, a)? {
        let matching = &space.dense.as_ref().expect("dense HH₀ present").matching;
        b.expect(t.hh_matrix.mat_mul(matching)? == dense, || format!("dense T{tag} differs"));
        b.note(format!("dense cross-check{tag} run"));
    } else {
        b.note(format!("dense cross-check{tag} skipped: tensor products too large"));
    }
    Ok(())
}

/// `S_a = T_a` on the trace space and, with legs, on the legged space.
pub fn verify_s_equals_t(s: &Scenario, name: &str, a: &Representation, legs: &[(String, Representation)]) -> CheckResult {
    run_check(format!("S = T [{name}; {}]", leg_label(legs)), |b| {
        let vacuum = legged_space(s, &[])?;
        st_on(b, s, &vacuum, name, a, "")?;
        if !legs.is_empty() {
            let legged = legged_space(s, &leg_reps(legs))?;
            st_on(b, s, &legged, name, a, " (legs)")?;
        }
        Ok(())
    })
}

/// `S_a = T_a` on an already built legged space.
pub fn verify_s_equals_t_on(
    s: &Scenario,
    space: &TraceSpace,
    name: &str,
    a: &Representation,
    legs: &[(String, Representation)],
) -> CheckResult {
    run_check(format!("S = T [{name}; {}]", leg_label(legs)), |b| st_on(b, s, space, name, a, " (legs)"))
}

/// Partial Frobenius maps commute pairwise and compose to the global monodromy.
pub fn verify_frobenius_product(s: &Scenario, legs: &[(String, Representation)]) -> CheckResult {
    run_check(format!("partial Frobenius product [{}]", leg_label(legs)), |b| {
        let space = legged_space(s, &leg_reps(legs))?;
        let ops = (0..legs.len()).map(|i| partial_frobenius(s, &space, i)).collect::<Result<Vec<_>>>()?;
        for (i, op) in ops.iter().enumerate() {
            b.matrix(format!("F_{i}"), &op.matrix);
            let t = t_operator(s, &space, &legs[i].1, &legs[i].0)?;
            b.expect(op.matrix.mat_mul(&t.matrix)? == t.matrix.mat_mul(&op.matrix)?, || format!("F_{i} and T do not commute"));
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                let (x, y) = (&ops[i].matrix, &ops[j].matrix);
                b.expect(x.mat_mul(y)? == y.mat_mul(x)?, || format!("F_{i} and F_{j} do not commute"));
            }
        }
        let product = ops
            .iter()
            .try_fold(FieldMatrix::identity(&s.ctx, space.dim()), |acc, op| acc.mat_mul(&op.matrix))?;
        let global = global_monodromy(s, &space)?;
        b.matrix("global monodromy", &global.matrix);
        b.expect(product == global.matrix, || "product of partial Frobenius maps ≠ global monodromy".into());
        Ok(())
    })
}

/// Hattori–Stallings class of `(K[G]^n E_a, id)` against the tautological excursion and `χ_a`.
pub fn chern_check(s: &Scenario, name: &str, a: &Representation) -> CheckResult {
    run_check(format!("Chern class = tautological excursion [{name}]"), |b| {
        if !s.is_circle() || !matches!(s.model, ModuleModel::Regular) {
            return Err(Error::CheckFailed("needs Γ trivial, φ = id and the regular model".into()));
        }
        let ng = s.group.order();
        if ng > CHERN_GROUP_LIMIT {
            return Err(Error::CheckFailed(format!("|G| = {ng} exceeds {CHERN_GROUP_LIMIT}")));
        }
        let space = legged_space(s, &[])?;
        let dense = space.dense.as_ref().ok_or_else(|| Error::CheckFailed("dense HH₀ unavailable".into()))?;
        let ctx = &s.ctx;
        let n = a.dim();
        let ad = a.dual();
        let inv_order = CycNumber::from_rational(ctx, BigRational::new(1.into(), (ng as i64).into()));
        // E_ij = |G|⁻¹ Σ_h a^∨(h)_ij h, an idempotent with K[G]^n E ≅ a
        let mut e = vec![vec![CycNumber::zero(ctx); ng]; n * n];
        for h in 0..ng {
            let m = ad.matrix(h);
            for i in 0..n {
                for j in 0..n {
                    e[i * n + j][h] = m.get(i, j) * &inv_order;
                }
            }
        }
        let pm = ProjectiveModuleData { n, e: e.clone(), b: e };
        let class = hattori_stallings(&pm, &dense.bimodule, &dense.hh)?;
        let block = space.comparison.apply(&dense.matching.apply(&class)?)?;
        let excursion = evaluate_excursion(&super::operators::s_datum(s, a)?, s.fixed())?.values;
        let oracle = character_oracle(s, a);
        b.vector("class", &block);
        b.vector("excursion", &excursion);
        b.vector("characters", &oracle);
        b.expect(block == excursion, || "class differs from the excursion function".into());
        b.expect(excursion == oracle, || "excursion function differs from the characters".into());
        Ok(())
    })
}

/// The excursion composite of `d` is block scalar multiplication and commutes with
/// every `T` and every partial Frobenius.
pub fn excursion_action_check(s: &Scenario, label: &str, d: &ExcursionDatum, legs: &[(String, Representation)]) -> CheckResult {
    run_check(format!("excursion action [{label}; {}]", leg_label(legs)), |b| {
        let space = legged_space(s, &leg_reps(legs))?;
        let (op, values) = excursion_operator(s, &space, d)?;
        b.vector("block scalars", &values);
        let mut others = Vec::new();
        for (rn, r) in &s.reps {
            others.push((format!("T({rn})"), t_operator(s, &space, r, rn)?.matrix));
        }
        for i in 0..legs.len() {
            others.push((format!("F_{i}"), partial_frobenius(s, &space, i)?.matrix));
        }
        for (what, m) in &others {
            b.expect(op.matrix.mat_mul(m)? == m.mat_mul(&op.matrix)?, || format!("excursion action does not commute with {what}"));
        }
        Ok(())
    })
}

/// The commutation iso `Q_r ⊗ Q_F ≅ Q_F ⊗ Q_r`, verified as a bimodule iso.
pub fn hecke_check(s: &Scenario, name: &str, r: &Representation) -> CheckResult {
    run_check(format!("Hecke commutation iso [{name}]"), |b| {
        match commutation_iso(s, r)? {
            Some(c) => b.text("dimension", c.dim.to_string()),
            None => b.note("dense bimodules too large; skipped"),
        }
        Ok(())
    })
}

/// `T_{a⊗b} = T_a T_b` and `T_{a⊕b} = T_a + T_b` on the trace space.
pub fn t_algebra_check(s: &Scenario, (an, a): (&str, &Representation), (bn, bb): (&str, &Representation)) -> CheckResult {
    run_check(format!("T multiplicative and additive [{an}, {bn}]"), |b| {
        let space = legged_space(s, &[])?;
        let ta = t_operator(s, &space, a, an)?.matrix;
        let tb = t_operator(s, &space, bb, bn)?.matrix;
        let tab = t_operator(s, &space, &a.tensor(bb)?, "tensor")?.matrix;
        let tsum = t_operator(s, &space, &a.direct_sum(bb)?, "sum")?.matrix;
        b.expect(tab == ta.mat_mul(&tb)?, || "T_{a⊗b} ≠ T_a T_b".into());
        b.expect(tsum == ta.mat_add(&tb)?, || "T_{a⊕b} ≠ T_a + T_b".into());
        Ok(())
    })
}

/// Burnside counts for both enumerations and agreement of the two fixed-locus descriptions.
pub fn enumeration_check(s: &Scenario, opts: EnumerateOptions) -> CheckResult {
    run_check("enumeration invariants", |b| {
        let c = s.char_groupoid();
        let f = s.fixed();
        let ng = s.group.order() as i64;
        let homs = c.homs().len() as i64;
        let fixed = f.objects().len() as i64;
        b.text("|Hom|", homs.to_string());
        b.text("|Fix|", fixed.to_string());
        b.text("orbits", format!("{} / {}", c.orbits().len(), f.orbit_count()));
        b.text("cardinality", c.cardinality().to_string());
        b.expect(c.cardinality() == BigRational::new(homs.into(), ng.into()), || "Hom cardinality ≠ |Hom|/|G|".into());
        b.expect(f.cardinality() == BigRational::new(fixed.into(), ng.into()), || "fixed cardinality ≠ |Fix|/|G|".into());
        for orbits in [c.orbits(), f.orbits()] {
            b.expect(
                orbits.orbits.iter().all(|o| o.members.len() * o.stabilizer.len() == ng as usize),
                || "orbit–stabilizer fails".into(),
            );
        }
        let torus = fixed_groupoid_torus_with(s.fixed().presentation(), &s.phi, &s.group, opts)?;
        let m = match_fixed_descriptions(f, &torus);
        b.expect(m.is_ok(), || format!("fixed-locus descriptions differ: {}", m.discrepancy.clone().unwrap_or_default()));
        Ok(())
    })
}

/// The span of excursion functions from `gens` with loops of length `≤ max_len` is all
/// class functions; oracle: rank of the character matrix `(χ_r(σ(w)))`.
pub fn span_check(s: &Scenario, gens: &[(String, Representation)], max_len: usize) -> CheckResult {
    let names = leg_label(gens);
    run_check(format!("excursion span [{names}; L = {max_len}]"), |b| {
        let reps = leg_reps(gens);
        let report = excursion_algebra_span(s.fixed(), &reps, &s.ctx, max_len, usize::MAX)?;
        let orbits = s.fixed().orbit_count();
        b.text("dimension", report.dimension.to_string());
        b.text("orbits", orbits.to_string());
        // rows: the constant function and σ ↦ χ_r(σ(w₁) σ(w₂)⁻¹) over loop pairs
        let words = crate::excursion::words_up_to(s.fixed().torus().rank(), max_len);
        let images = (0..orbits)
            .map(|o| {
                let rep = s.fixed().representative(o);
                words.iter().map(|w| loop_image(rep, w, &s.group)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut rows = vec![vec![CycNumber::one(&s.ctx); orbits]];
        for r in &reps {
            let ch = r.character();
            for i in 0..words.len() {
                for j in 0..words.len() {
                    let row: Vec<CycNumber> = images
                        .iter()
                        .map(|im| ch.at(s.group.mul(im[i], s.group.inv(im[j]))).clone())
                        .collect();
                    rows.push(row);
                }
            }
        }
        let rank = FieldMatrix::from_rows(&s.ctx, rows)?.rank();
        b.text("character-matrix rank", rank.to_string());
        b.expect(report.dimension == rank, || format!("span {} ≠ character rank {rank}", report.dimension));
        b.expect(report.is_full(), || format!("span {} < {orbits} orbits", report.dimension));
        Ok(())
    })
}

/// Loops `(t, e)` used by `S`.
pub fn tautological_loops(s: &Scenario) -> Vec<Word> {
    vec![s.frobenius_loop(), Word::empty()]
}
