use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groups::{
    action_orbits, conjugation_orbits, enumerate_homs_with, evaluate_word, mapping_torus, EnumerateOptions,
    Endomorphism, FinGroup, GroupHom, Orbits, Presentation, Word,
};

fn cardinality(orbits: &Orbits) -> BigRational {
    orbits
        .orbits
        .iter()
        .map(|o| BigRational::new(BigInt::from(1), BigInt::from(o.stabilizer.len())))
        .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b)
}

fn check_burnside(orbits: &Orbits, objects: usize, order: usize) -> Result<()> {
    let sum: usize = orbits.orbits.iter().map(|o| order / o.stabilizer.len()).sum();
    if sum != objects || orbits.orbits.iter().any(|o| o.members.len() * o.stabilizer.len() != order) {
        return Err(Error::CheckFailed(format!("orbit-stabilizer: {sum} ≠ {objects}")));
    }
    Ok(())
}

/// `Hom(Γ, G)` with its conjugation orbits.
#[derive(Clone, Debug)]
pub struct CharGroupoid {
    presentation: Presentation,
    group: Arc<FinGroup>,
    homs: Vec<GroupHom>,
    index: HashMap<GroupHom, usize>,
    orbits: Orbits,
}

impl CharGroupoid {
    pub fn build(p: &Presentation, g: &Arc<FinGroup>, opts: EnumerateOptions) -> Result<Self> {
        let homs = enumerate_homs_with(p, g, opts)?;
        let orbits = conjugation_orbits(&homs, g);
        check_burnside(&orbits, homs.len(), g.order())?;
        let index = homs.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
        Ok(CharGroupoid { presentation: p.clone(), group: g.clone(), homs, index, orbits })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn homs(&self) -> &[GroupHom] {
        &self.homs
    }

    pub fn orbits(&self) -> &Orbits {
        &self.orbits
    }

    pub fn index_of(&self, h: &GroupHom) -> Option<usize> {
        self.index.get(h).copied()
    }

    /// Index of `hρh⁻¹`.
    pub fn act(&self, h: usize, object: usize) -> usize {
        self.index[&self.homs[object].conjugate(&self.group, h)]
    }

    /// `Σ_orbits 1/|Aut|`.
    pub fn cardinality(&self) -> BigRational {
        cardinality(&self.orbits)
    }
}

pub fn build_char_groupoid(p: &Presentation, g: &Arc<FinGroup>) -> Result<CharGroupoid> {
    CharGroupoid::build(p, g, EnumerateOptions::default())
}

/// A point of the fixed locus: `ρ` together with `g` such that `ρ(φ(x)) = g ρ(x) g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedObject {
    pub rho: GroupHom,
    pub g: usize,
}

impl FixedObject {
    /// Generator images for the mapping-torus presentation (`t` last).
    pub fn torus_images(&self) -> Vec<usize> {
        let mut v = self.rho.images.clone();
        v.push(self.g);
        v
    }

    pub fn conjugate(&self, grp: &FinGroup, h: usize) -> FixedObject {
        FixedObject { rho: self.rho.conjugate(grp, h), g: grp.conj(h, self.g) }
    }
}

/// The groupoid of pairs `(ρ, g)` under simultaneous conjugation.
#[derive(Clone, Debug)]
pub struct FixedGroupoid {
    presentation: Presentation,
    phi: Endomorphism,
    torus: Presentation,
    group: Arc<FinGroup>,
    objects: Vec<FixedObject>,
    index: HashMap<FixedObject, usize>,
    orbits: Orbits,
}

impl FixedGroupoid {
    fn from_objects(
        presentation: &Presentation,
        phi: &Endomorphism,
        group: &Arc<FinGroup>,
        objects: Vec<FixedObject>,
    ) -> Result<Self> {
        let index: HashMap<FixedObject, usize> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        for o in &objects {
            for &h in group.generators() {
                if !index.contains_key(&o.conjugate(group, h)) {
                    return Err(Error::CheckFailed("fixed-point objects not closed under conjugation".into()));
                }
            }
        }
        let orbits = action_orbits(objects.len(), group, |h, p| index[&objects[p].conjugate(group, h)]);
        check_burnside(&orbits, objects.len(), group.order())?;
        Ok(FixedGroupoid {
            presentation: presentation.clone(),
            phi: phi.clone(),
            torus: mapping_torus(presentation, phi),
            group: group.clone(),
            objects,
            index,
            orbits,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn torus(&self) -> &Presentation {
        &self.torus
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn objects(&self) -> &[FixedObject] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &FixedObject {
        &self.objects[i]
    }

    pub fn index_of(&self, o: &FixedObject) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn orbits(&self) -> &Orbits {
        &self.orbits
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn representative(&self, orbit: usize) -> &FixedObject {
        &self.objects[self.orbits.orbits[orbit].representative]
    }

    /// Automorphism group of the orbit representative.
    pub fn stabilizer(&self, orbit: usize) -> &[usize] {
        &self.orbits.orbits[orbit].stabilizer
    }

    pub fn act(&self, h: usize, object: usize) -> usize {
        self.index[&self.objects[object].conjugate(&self.group, h)]
    }

    pub fn cardinality(&self) -> BigRational {
        cardinality(&self.orbits)
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

/// Enumerate pairs `(ρ, g)` over an already computed `Hom(Γ, G)`.
pub fn fixed_groupoid_pairs(c: &CharGroupoid, phi: &Endomorphism) -> Result<FixedGroupoid> {
    let g = &c.group;
    let mut objects = Vec::new();
    for rho in &c.homs {
        let pulled = phi.pull_back(&rho.images, g)?;
        for k in 0..g.order() {
            if pulled.iter().zip(&rho.images).all(|(&px, &x)| px == g.conj(k, x)) {
                objects.push(FixedObject { rho: rho.clone(), g: k });
            }
        }
    }
    FixedGroupoid::from_objects(&c.presentation, phi, g, objects)
}

/// Enumerate `Hom(mapping torus, G)` and split off the image of `t`.
pub fn fixed_groupoid_torus(p: &Presentation, phi: &Endomorphism, g: &Arc<FinGroup>) -> Result<FixedGroupoid> {
    fixed_groupoid_torus_with(p, phi, g, EnumerateOptions::default())
}

pub fn fixed_groupoid_torus_with(
    p: &Presentation,
    phi: &Endomorphism,
    g: &Arc<FinGroup>,
    opts: EnumerateOptions,
) -> Result<FixedGroupoid> {
    let torus = mapping_torus(p, phi);
    let homs = enumerate_homs_with(&torus, g, opts)?;
    let r = p.rank();
    let objects = homs
        .into_iter()
        .map(|h| FixedObject { rho: GroupHom { images: h.images[..r].to_vec() }, g: h.images[r] })
        .collect();
    FixedGroupoid::from_objects(p, phi, g, objects)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedMatch {
    /// Object `i` of the first groupoid corresponds to `bijection[i]` of the second.
    pub bijection: Vec<usize>,
    pub discrepancy: Option<String>,
}

impl FixedMatch {
    pub fn is_ok(&self) -> bool {
        self.discrepancy.is_none()
    }
}

/// Compare two fixed-point groupoids object by object, including actions and stabilizers.
pub fn match_fixed_descriptions(a: &FixedGroupoid, b: &FixedGroupoid) -> FixedMatch {
    let fail = |bij: Vec<usize>, msg: String| FixedMatch { bijection: bij, discrepancy: Some(msg) };
    if *a.group != *b.group {
        return fail(vec![], "different groups".into());
    }
    if a.objects.len() != b.objects.len() {
        return fail(vec![], format!("{} objects vs {}", a.objects.len(), b.objects.len()));
    }
    let mut bij = Vec::with_capacity(a.objects.len());
    for (i, o) in a.objects.iter().enumerate() {
        match b.index_of(o) {
            Some(j) => bij.push(j),
            None => return fail(bij, format!("object {i} ({o:?}) missing")),
        }
    }
    let mut seen = vec![false; bij.len()];
    for &j in &bij {
        if std::mem::replace(&mut seen[j], true) {
            return fail(bij, format!("object {j} hit twice"));
        }
    }
    for i in 0..a.objects.len() {
        for h in 0..a.group.order() {
            if bij[a.act(h, i)] != b.act(h, bij[i]) {
                return fail(bij, format!("action of element {h} differs at object {i}"));
            }
        }
    }
    for oa in &a.orbits.orbits {
        let ob = &b.orbits.orbits[b.orbits.orbit_of[bij[oa.representative]]];
        let mut sa: Vec<usize> = oa.members.iter().map(|&m| bij[m]).collect();
        sa.sort_unstable();
        if sa != ob.members {
            return fail(bij, format!("orbit of object {} differs", oa.representative));
        }
        let same_rep = bij[oa.representative] == ob.representative;
        if oa.stabilizer.len() != ob.stabilizer.len() || (same_rep && oa.stabilizer != ob.stabilizer) {
            return fail(bij, format!("stabilizer of object {} differs", oa.representative));
        }
    }
    FixedMatch { bijection: bij, discrepancy: None }
}

/// Parallel transport along a loop in the torus presentation, as a group element.
pub fn loop_image(o: &FixedObject, loop_word: &Word, g: &FinGroup) -> Result<usize> {
    evaluate_word(loop_word, &o.torus_images(), g)
}
