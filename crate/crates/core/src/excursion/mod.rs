//! Excursion data `(V_J, v, v*, γ_J)` and the class functions they define on
//! the fixed-point groupoid.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::charstack::{loop_image, FixedGroupoid, FixedObject};
use crate::error::{Error, Result};
use crate::exactfield::{dot, kron_apply, unit_vector, vec_is_zero, Ctx, CycNumber, FieldMatrix, RowSpace, Vector};
use crate::groups::{FinGroup, Word};
use crate::reptheory::{RepKind, Representation};

pub const DEFAULT_LOOP_LENGTH: usize = 4;
pub const DEFAULT_SPAN_CAP: usize = 1_000_000;

/// Orbits larger than this are spot-checked at their representative only.
const CONSTANCY_CHECK_LIMIT: usize = 64;

/// Slot representations with a diagonally invariant vector and covector.
#[derive(Clone, Debug)]
pub struct XiDatum {
    reps: Vec<Representation>,
    v: Vector,
    vstar: Vector,
    ctx: Ctx,
    group: Arc<FinGroup>,
}

impl XiDatum {
    pub fn new(group: &Arc<FinGroup>, ctx: &Ctx, reps: Vec<Representation>, v: Vector, vstar: Vector) -> Result<Self> {
        let width: usize = reps.iter().map(Representation::dim).product();
        if v.len() != width || vstar.len() != width {
            return Err(Error::DimensionMismatch(format!(
                "slot tensor has width {width}, v has {} and v* has {}",
                v.len(),
                vstar.len()
            )));
        }
        for r in &reps {
            if **r.group() != **group {
                return Err(Error::GroupMismatch);
            }
        }
        let xi = XiDatum { reps, v, vstar, ctx: ctx.clone(), group: group.clone() };
        xi.check_invariance()?;
        Ok(xi)
    }

    /// The empty slot set with `v = v* = 1`.
    pub fn unit(group: &Arc<FinGroup>, ctx: &Ctx) -> Self {
        let one = vec![CycNumber::one(ctx)];
        XiDatum { reps: vec![], v: one.clone(), vstar: one, ctx: ctx.clone(), group: group.clone() }
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    pub fn v(&self) -> &[CycNumber] {
        &self.v
    }

    pub fn vstar(&self) -> &[CycNumber] {
        &self.vstar
    }

    pub fn slots(&self) -> usize {
        self.reps.len()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    /// Apply `⊗_j M_j` with `M_j = r_j(g_j)`.
    pub fn act(&self, elements: &[usize], x: &[CycNumber]) -> Result<Vector> {
        let mats: Vec<&FieldMatrix> = self.reps.iter().zip(elements).map(|(r, &g)| r.matrix(g)).collect();
        kron_apply(&mats, x)
    }

    /// `P v = v` and `v* P = v*` for the diagonal averaging projector `P`.
    pub fn check_invariance(&self) -> Result<()> {
        let n = self.group.order();
        let width = self.v.len();
        let mut pv = vec![CycNumber::zero(&self.ctx); width];
        let mut pvs = vec![CycNumber::zero(&self.ctx); width];
        for g in 0..n {
            let diag = vec![g; self.slots()];
            let gv = self.act(&diag, &self.v)?;
            let mats: Vec<FieldMatrix> = self.reps.iter().map(|r| r.matrix(g).transpose()).collect();
            let refs: Vec<&FieldMatrix> = mats.iter().collect();
            let gvs = kron_apply(&refs, &self.vstar)?;
            for i in 0..width {
                pv[i] += &gv[i];
                pvs[i] += &gvs[i];
            }
        }
        let inv = BigRational::new(BigInt::from(1), BigInt::from(n));
        let pv: Vector = pv.iter().map(|x| x.scale(&inv)).collect();
        let pvs: Vector = pvs.iter().map(|x| x.scale(&inv)).collect();
        if pv != self.v {
            return Err(Error::InvarianceViolation("v is not invariant under the diagonal action".into()));
        }
        if pvs != self.vstar {
            return Err(Error::InvarianceViolation("v* is not invariant under the diagonal action".into()));
        }
        Ok(())
    }

    /// Pad with trivial slots up to `n` slots.
    pub fn padded(&self, n: usize) -> Result<Self> {
        let mut out = self.clone();
        while out.reps.len() < n {
            out.reps.push(Representation::builtin(&self.group, &self.ctx, RepKind::Trivial)?);
        }
        Ok(out)
    }
}

/// Slots `(a, a^∨)` with the coevaluation vector and the evaluation covector.
pub fn xi_from_rep(a: &Representation) -> Result<XiDatum> {
    let d = a.dim();
    let ctx = a.ctx();
    let mut v = vec![CycNumber::zero(ctx); d * d];
    for i in 0..d {
        v[i * d + i] = CycNumber::one(ctx);
    }
    XiDatum::new(a.group(), ctx, vec![a.clone(), a.dual()], v.clone(), v)
}

/// Slot-wise tensor product; inputs with fewer slots are padded with trivial slots.
pub fn xi_star(x1: &XiDatum, x2: &XiDatum) -> Result<XiDatum> {
    if **x1.group() != **x2.group() {
        return Err(Error::GroupMismatch);
    }
    let n = x1.slots().max(x2.slots());
    let (a, b) = (x1.padded(n)?, x2.padded(n)?);
    let reps = a.reps.iter().zip(&b.reps).map(|(r, s)| r.tensor(s)).collect::<Result<Vec<_>>>()?;
    let da: Vec<usize> = a.reps.iter().map(Representation::dim).collect();
    let db: Vec<usize> = b.reps.iter().map(Representation::dim).collect();
    let v = interleave(&a.v, &da, &b.v, &db);
    let vstar = interleave(&a.vstar, &da, &b.vstar, &db);
    XiDatum::new(x1.group(), x1.ctx(), reps, v, vstar)
}

fn multi_index(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for j in (0..dims.len()).rev() {
        out[j] = i % dims[j];
        i /= dims[j];
    }
    out
}

/// `x ⊗ y` reordered so that slot `j` of the result is `X_j ⊗ Y_j`.
fn interleave(x: &[CycNumber], dx: &[usize], y: &[CycNumber], dy: &[usize]) -> Vector {
    let ctx = x[0].ctx();
    let mut out = vec![CycNumber::zero(ctx); x.len() * y.len()];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mi = multi_index(i, dx);
        for (k, b) in y.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mk = multi_index(k, dy);
            let mut idx = 0;
            for j in 0..dx.len() {
                idx = idx * (dx[j] * dy[j]) + mi[j] * dy[j] + mk[j];
            }
            out[idx] = a * b;
        }
    }
    out
}

/// A datum together with one loop per slot, written over the mapping-torus generators.
#[derive(Clone, Debug)]
pub struct ExcursionDatum {
    pub xi: XiDatum,
    pub loops: Vec<Word>,
}

impl ExcursionDatum {
    pub fn new(xi: XiDatum, loops: Vec<Word>) -> Result<Self> {
        if loops.len() != xi.slots() {
            return Err(Error::DimensionMismatch(format!("{} loops for {} slots", loops.len(), xi.slots())));
        }
        Ok(ExcursionDatum { xi, loops })
    }

    /// `v* ∘ (⊗_j r_j(σ(γ_j))) ∘ v`.
    pub fn value_at(&self, sigma: &FixedObject) -> Result<CycNumber> {
        let g = self.xi.group();
        let elems = self.loops.iter().map(|w| loop_image(sigma, w, g)).collect::<Result<Vec<_>>>()?;
        let mv = self.xi.act(&elems, &self.xi.v)?;
        Ok(dot(&self.xi.vstar, &mv))
    }
}

/// A function on the orbits of the fixed-point groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcursionFunction {
    pub values: Vec<CycNumber>,
}

impl ExcursionFunction {
    pub fn mul(&self, other: &Self) -> Self {
        ExcursionFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    pub fn pretty(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(CycNumber::pretty).collect();
        format!("({})", parts.join(", "))
    }
}

pub fn evaluate_excursion(d: &ExcursionDatum, f: &FixedGroupoid) -> Result<ExcursionFunction> {
    evaluate_excursion_with(d, f, true)
}

/// Evaluate at each orbit representative; with `check`, also at every member of
/// small orbits, failing if the values disagree.
pub fn evaluate_excursion_with(d: &ExcursionDatum, f: &FixedGroupoid, check: bool) -> Result<ExcursionFunction> {
    let mut values = Vec::with_capacity(f.orbit_count());
    for orbit in &f.orbits().orbits {
        let val = d.value_at(f.object(orbit.representative))?;
        if check && orbit.members.len() <= CONSTANCY_CHECK_LIMIT {
            for &m in &orbit.members {
                if d.value_at(f.object(m))? != val {
                    return Err(Error::InvarianceViolation(format!(
                        "excursion value differs inside the orbit of object {}",
                        orbit.representative
                    )));
                }
            }
        }
        values.push(val);
    }
    Ok(ExcursionFunction { values })
}

/// All words of length at most `max_len` in `rank` generators and their inverses,
/// ordered by length and then lexicographically.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<(usize, i8)> = (0..rank).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in &letters {
                let mut x = w.clone();
                x.letters.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct SpanWitness {
    /// Index into the generating representations, or `None` for the unit datum.
    pub rep: Option<usize>,
    pub loops: Vec<Word>,
}

#[derive(Clone, Debug)]
pub struct SpanReport {
    pub dimension: usize,
    pub orbit_count: usize,
    pub basis: Vec<ExcursionFunction>,
    pub witnesses: Vec<SpanWitness>,
    /// An orbit whose indicator function lies outside the span, if the span is proper.
    pub gap: Option<usize>,
    pub data_evaluated: usize,
}

impl SpanReport {
    pub fn is_full(&self) -> bool {
        self.dimension == self.orbit_count
    }
}

/// Span of the unit function and of the functions of `xi_from_rep(a)` with all
/// loop pairs of length `≤ max_len`, inside the class functions.
pub fn excursion_algebra_span(
    f: &FixedGroupoid,
    gens: &[Representation],
    ctx: &Ctx,
    max_len: usize,
    cap: usize,
) -> Result<SpanReport> {
    let n = f.orbit_count();
    let mut space = RowSpace::new(ctx, n);
    let mut basis = Vec::new();
    let mut witnesses = Vec::new();
    let mut evaluated = 0usize;
    let mut consider = |func: ExcursionFunction, w: SpanWitness, space: &mut RowSpace| {
        if !vec_is_zero(&func.values) && space.insert(&func.values) {
            basis.push(func);
            witnesses.push(w);
        }
    };
    let unit = ExcursionDatum::new(XiDatum::unit(f.group(), ctx), vec![])?;
    consider(evaluate_excursion_with(&unit, f, false)?, SpanWitness { rep: None, loops: vec![] }, &mut space);
    evaluated += 1;
    let words = words_up_to(f.torus().rank(), max_len);
    let xis = gens.iter().map(xi_from_rep).collect::<Result<Vec<_>>>()?;
    // pairs ordered so that short loops come first
    'outer: for hi in 0..words.len() {
        for lo in 0..=hi {
            let pairs: &[(usize, usize)] = if lo == hi { &[(hi, hi)] } else { &[(hi, lo), (lo, hi)] };
            for &(i, j) in pairs {
                for (ri, xi) in xis.iter().enumerate() {
                    if space.is_full() {
                        break 'outer;
                    }
                    if evaluated >= cap {
                        return Err(Error::CombinatorialCap(format!(
                            "{cap} excursion data evaluated before the span saturated"
                        )));
                    }
                    let loops = vec![words[i].clone(), words[j].clone()];
                    let d = ExcursionDatum::new(xi.clone(), loops.clone())?;
                    consider(evaluate_excursion_with(&d, f, false)?, SpanWitness { rep: Some(ri), loops }, &mut space);
                    evaluated += 1;
                }
            }
        }
    }
    let gap = (0..n).find(|&o| !space.contains(&unit_vector(ctx, n, o)));
    Ok(SpanReport { dimension: space.rank(), orbit_count: n, basis, witnesses, gap, data_evaluated: evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charstack::fixed_groupoid_torus;
    use crate::exactfield::make_context;
    use crate::groups::{Endomorphism, Permutation, Presentation};
    use crate::reptheory::rep_from_generator_matrices;

    fn s3() -> Arc<FinGroup> {
        let gens = [Permutation::parse_cycles(3, "(0 1)").unwrap(), Permutation::parse_cycles(3, "(0 1 2)").unwrap()];
        Arc::new(FinGroup::from_permutations(3, &gens).unwrap())
    }

    fn s3_reps(g: &Arc<FinGroup>, ctx: &Ctx) -> (Representation, Representation, Representation) {
        let triv = Representation::builtin(g, ctx, RepKind::Trivial).unwrap();
        let sign = rep_from_generator_matrices(
            g,
            ctx,
            1,
            &[FieldMatrix::from_int_rows(ctx, &[&[-1]]), FieldMatrix::from_int_rows(ctx, &[&[1]])],
        )
        .unwrap();
        let a = FieldMatrix::from_int_rows(ctx, &[&[-1, 1], &[0, 1]]);
        let b = FieldMatrix::from_int_rows(ctx, &[&[-1, 1], &[-1, 0]]);
        let std = rep_from_generator_matrices(g, ctx, 2, &[a, b]).unwrap();
        (triv, sign, std)
    }

    fn inertia(g: &Arc<FinGroup>) -> FixedGroupoid {
        let p = Presentation::free(0);
        fixed_groupoid_torus(&p, &Endomorphism::identity(&p), g).unwrap()
    }

    fn ints(ctx: &Ctx, v: &[i64]) -> Vec<CycNumber> {
        v.iter().map(|&x| CycNumber::from_int(ctx, x)).collect()
    }

    #[test]
    fn std_excursion_is_character() {
        let g = s3();
        let ctx = make_context(1).unwrap();
        let (triv, _, std) = s3_reps(&g, &ctx);
        let f = inertia(&g);
        let t = f.torus().parse_word("t").unwrap();
        let d = ExcursionDatum::new(xi_from_rep(&std).unwrap(), vec![t.clone(), Word::empty()]).unwrap();
        assert_eq!(evaluate_excursion(&d, &f).unwrap().values, ints(&ctx, &[2, 0, -1]));
        let d = ExcursionDatum::new(xi_from_rep(&std).unwrap(), vec![Word::empty(), Word::empty()]).unwrap();
        assert_eq!(evaluate_excursion(&d, &f).unwrap().values, ints(&ctx, &[2, 2, 2]));
        let d = ExcursionDatum::new(xi_from_rep(&triv).unwrap(), vec![t.clone(), t]).unwrap();
        assert_eq!(evaluate_excursion(&d, &f).unwrap().values, ints(&ctx, &[1, 1, 1]));
    }

    #[test]
    fn non_invariant_vector_rejected() {
        let g = s3();
        let ctx = make_context(1).unwrap();
        let (_, _, std) = s3_reps(&g, &ctx);
        let v = ints(&ctx, &[1, 0]);
        assert!(XiDatum::new(&g, &ctx, vec![std], v.clone(), v).is_err());
    }

    #[test]
    fn star_is_multiplicative() {
        let g = s3();
        let ctx = make_context(1).unwrap();
        let (triv, sign, std) = s3_reps(&g, &ctx);
        let f = inertia(&g);
        let t = f.torus().parse_word("t").unwrap();
        let loops = vec![t, Word::empty()];
        let xs = xi_from_rep(&std).unwrap();
        let eval = |x: &XiDatum| evaluate_excursion(&ExcursionDatum::new(x.clone(), loops.clone()).unwrap(), &f).unwrap();
        let ss = xi_star(&xs, &xs).unwrap();
        assert_eq!(eval(&ss).values, ints(&ctx, &[4, 0, 1]));
        let xg = xi_from_rep(&sign).unwrap();
        assert_eq!(eval(&xi_star(&xs, &xg).unwrap()), eval(&xs).mul(&eval(&xg)));
        assert_eq!(eval(&xi_star(&xg, &xs).unwrap()), eval(&xi_star(&xs, &xg).unwrap()));
        assert_eq!(eval(&xi_star(&xs, &xi_from_rep(&triv).unwrap()).unwrap()), eval(&xs));
        let padded = xi_star(&XiDatum::unit(&g, &ctx), &xs).unwrap();
        assert_eq!(eval(&padded), eval(&xs));
    }

    #[test]
    fn spans() {
        let g = s3();
        let ctx = make_context(1).unwrap();
        let (triv, sign, std) = s3_reps(&g, &ctx);
        let f = inertia(&g);
        let r = excursion_algebra_span(&f, &[triv.clone(), sign, std], &ctx, 1, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!((r.dimension, r.orbit_count), (3, 3));
        assert!(r.gap.is_none());
        let r = excursion_algebra_span(&f, &[triv], &ctx, 1, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(r.gap.is_some());

        let z3 = Arc::new(FinGroup::from_permutations(3, &[Permutation::parse_cycles(3, "(0 1 2)").unwrap()]).unwrap());
        let ctx3 = make_context(3).unwrap();
        let p = Presentation::free(1);
        let phi = Endomorphism::parse(&p, &[("a", "a^2")]).unwrap();
        let fz = fixed_groupoid_torus(&p, &phi, &z3).unwrap();
        let chi = Representation::builtin(&z3, &ctx3, RepKind::AbelianCharacter(1)).unwrap();
        let r = excursion_algebra_span(&fz, &[chi], &ctx3, 1, DEFAULT_SPAN_CAP).unwrap();
        assert_eq!(r.dimension, 3);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words_up_to(2, 2).len(), 1 + 4 + 16);
        assert_eq!(words_up_to(0, 3).len(), 1);
    }
}
