use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactfield::{make_context, Ctx, FieldMatrix, Vector};
use crate::groups::{evaluate_word, FinGroup, GroupHom, Orbits, Word};
use crate::reptheory::{averaging_projector, RepKind, Representation};

use super::groupoid::{loop_image, CharGroupoid, FixedGroupoid, FixedObject};

/// A groupoid presented as a finite set with a conjugation action of `G`.
pub trait ActionGroupoid {
    fn group(&self) -> &Arc<FinGroup>;
    fn orbits(&self) -> &Orbits;
    fn object_count(&self) -> usize;
    /// Index of `h · x`.
    fn act(&self, h: usize, x: usize) -> usize;
}

impl ActionGroupoid for CharGroupoid {
    fn group(&self) -> &Arc<FinGroup> {
        CharGroupoid::group(self)
    }
    fn orbits(&self) -> &Orbits {
        CharGroupoid::orbits(self)
    }
    fn object_count(&self) -> usize {
        self.homs().len()
    }
    fn act(&self, h: usize, x: usize) -> usize {
        CharGroupoid::act(self, h, x)
    }
}

impl ActionGroupoid for FixedGroupoid {
    fn group(&self) -> &Arc<FinGroup> {
        FixedGroupoid::group(self)
    }
    fn orbits(&self) -> &Orbits {
        FixedGroupoid::orbits(self)
    }
    fn object_count(&self) -> usize {
        self.objects().len()
    }
    fn act(&self, h: usize, x: usize) -> usize {
        FixedGroupoid::act(self, h, x)
    }
}

/// A vector bundle on an action groupoid whose fibers are all one model space
/// and whose arrow `h` acts by the same matrix at every object.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    legs: Vec<Representation>,
    fiber: Representation,
    stabilizers: Vec<Vec<usize>>,
    connecting: Vec<usize>,
}

impl EquivariantBundle {
    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    pub fn fiber(&self) -> &Representation {
        &self.fiber
    }

    pub fn legs(&self) -> &[Representation] {
        &self.legs
    }

    pub fn transport(&self, h: usize) -> &FieldMatrix {
        self.fiber.matrix(h)
    }

    /// Composition checks on stabilizer elements and the orbit-connecting arrows.
    pub fn check_functoriality(&self) -> Result<()> {
        let g = self.fiber.group();
        if !self.transport(g.identity()).is_identity() {
            return Err(Error::CheckFailed("transport(e) ≠ I".into()));
        }
        for st in &self.stabilizers {
            let sample = &st[..st.len().min(16)];
            for &a in sample {
                for &b in sample {
                    if self.transport(a).mat_mul(self.transport(b))? != *self.transport(g.mul(a, b)) {
                        return Err(Error::CheckFailed("transport not functorial on stabilizer".into()));
                    }
                }
            }
        }
        for &k in &self.connecting {
            if !self.transport(k).mat_mul(self.transport(g.inv(k)))?.is_identity() {
                return Err(Error::CheckFailed("connecting transport not invertible".into()));
            }
        }
        Ok(())
    }
}

/// Fiber `⊗_j V_{r_j}` with arrows acting diagonally; no legs gives the trivial line bundle.
pub fn bundle_from_rep(base: &dyn ActionGroupoid, legs: &[Representation], ctx: &Ctx) -> Result<EquivariantBundle> {
    let g = base.group();
    let mut fiber = Representation::builtin(g, ctx, RepKind::Trivial)?;
    for r in legs {
        if **r.group() != **g {
            return Err(Error::GroupMismatch);
        }
        fiber = fiber.tensor(r)?;
    }
    let orbits = base.orbits();
    let bundle = EquivariantBundle {
        legs: legs.to_vec(),
        fiber,
        stabilizers: orbits.orbits.iter().map(|o| o.stabilizer.clone()).collect(),
        connecting: orbits.transporter.clone(),
    };
    bundle.check_functoriality()?;
    Ok(bundle)
}

/// Per-orbit bases of `fiber^{Aut}` at the orbit representatives.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub per_orbit: Vec<Vec<Vector>>,
    pub projectors: Vec<FieldMatrix>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.per_orbit.iter().map(Vec::len).sum()
    }

    pub fn orbit_dims(&self) -> Vec<usize> {
        self.per_orbit.iter().map(Vec::len).collect()
    }
}

pub fn sections(e: &EquivariantBundle) -> Result<SectionSpace> {
    let mut per_orbit = Vec::new();
    let mut projectors = Vec::new();
    for st in &e.stabilizers {
        let p = averaging_projector(e.fiber.ctx(), e.fiber_dim(), st.iter().map(|&h| e.transport(h)))?;
        per_orbit.push(p.column_space_basis());
        projectors.push(p);
    }
    Ok(SectionSpace { per_orbit, projectors })
}

/// `r(σ(γ))` for a loop in the torus presentation.
pub fn monodromy(sigma: &FixedObject, loop_word: &Word, r: &Representation) -> Result<FieldMatrix> {
    Ok(r.matrix(loop_image(sigma, loop_word, r.group())?).clone())
}

/// `r(ρ(γ))` for a loop in `Γ`.
pub fn monodromy_char(rho: &GroupHom, loop_word: &Word, r: &Representation) -> Result<FieldMatrix> {
    Ok(r.matrix(evaluate_word(loop_word, &rho.images, r.group())?).clone())
}

/// Context helper for rational-only bundles.
pub fn rational_context() -> Ctx {
    make_context(1).expect("conductor 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charstack::{build_char_groupoid, fixed_groupoid_torus};
    use crate::exactfield::CycNumber;
    use crate::groups::{Endomorphism, Permutation, Presentation};
    use crate::reptheory::rep_from_generator_matrices;

    fn s3() -> Arc<FinGroup> {
        let gens = [Permutation::parse_cycles(3, "(0 1)").unwrap(), Permutation::parse_cycles(3, "(0 1 2)").unwrap()];
        Arc::new(FinGroup::from_permutations(3, &gens).unwrap())
    }

    fn std_rep(g: &Arc<FinGroup>, ctx: &Ctx) -> Representation {
        let a = FieldMatrix::from_int_rows(ctx, &[&[-1, 1], &[0, 1]]);
        let b = FieldMatrix::from_int_rows(ctx, &[&[-1, 1], &[-1, 0]]);
        rep_from_generator_matrices(g, ctx, 2, &[a, b]).unwrap()
    }

    fn inertia(g: &Arc<FinGroup>) -> FixedGroupoid {
        let p = Presentation::free(0);
        fixed_groupoid_torus(&p, &Endomorphism::identity(&p), g).unwrap()
    }

    #[test]
    fn bundle_shapes() {
        let g = s3();
        let ctx = rational_context();
        let f = inertia(&g);
        let line = bundle_from_rep(&f, &[], &ctx).unwrap();
        assert_eq!(line.fiber_dim(), 1);
        assert!((0..6).all(|h| line.transport(h).is_identity()));
        let std = std_rep(&g, &ctx);
        let e = bundle_from_rep(&f, &[std.clone()], &ctx).unwrap();
        assert_eq!(e.fiber_dim(), 2);
        assert_eq!(e.transport(3), std.matrix(3));
        assert_eq!(bundle_from_rep(&f, &[std.clone(), std], &ctx).unwrap().fiber_dim(), 4);
    }

    #[test]
    fn std_sections_on_inertia() {
        let g = s3();
        let ctx = rational_context();
        let f = inertia(&g);
        let std = std_rep(&g, &ctx);
        let s = sections(&bundle_from_rep(&f, &[std.clone()], &ctx).unwrap()).unwrap();
        assert_eq!(s.orbit_dims(), vec![0, 1, 0]);
        // character oracle: ⟨χ|Z(g), 1⟩ = (1/|Z|) Σ_{z ∈ Z} χ(z)
        let chi = std.character();
        for o in 0..f.orbit_count() {
            let z = g.centralizer(&[f.representative(o).g]);
            let mut acc = CycNumber::zero(&ctx);
            for &x in &z {
                acc += chi.at(x);
            }
            assert_eq!(acc, CycNumber::from_int(&ctx, s.per_orbit[o].len() as i64 * z.len() as i64));
        }
        let line = sections(&bundle_from_rep(&f, &[], &ctx).unwrap()).unwrap();
        assert_eq!(line.dim(), f.orbit_count());
    }

    #[test]
    fn monodromy_along_t() {
        let g = s3();
        let ctx = rational_context();
        let f = inertia(&g);
        let std = std_rep(&g, &ctx);
        let t = f.torus().parse_word("t").unwrap();
        for o in f.objects() {
            assert_eq!(&monodromy(o, &t, &std).unwrap(), std.matrix(o.g));
            assert!(monodromy(o, &Word::empty(), &std).unwrap().is_identity());
        }
        let c = build_char_groupoid(&Presentation::free(1), &g).unwrap();
        let e = bundle_from_rep(&c, &[], &ctx).unwrap();
        assert_eq!(sections(&e).unwrap().dim(), 3);
        let a = Word::generator(0);
        assert_eq!(&monodromy_char(&c.homs()[2], &a, &std).unwrap(), std.matrix(c.homs()[2].images[0]));
    }
}
