use std::collections::HashMap;

use super::fingroup::FinGroup;
use super::presentation::{evaluate_word, Endomorphism, Presentation, Word};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SEARCH_NODES: u64 = 10_000_000;

/// A homomorphism from a presented group, stored as the image of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<usize>,
}

impl GroupHom {
    pub fn conjugate(&self, g: &FinGroup, k: usize) -> GroupHom {
        GroupHom { images: self.images.iter().map(|&x| g.conj(k, x)).collect() }
    }

    pub fn eval(&self, w: &Word, g: &FinGroup) -> Result<usize> {
        evaluate_word(w, &self.images, g)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub max_nodes: u64,
    /// Search only first-generator images that are class representatives, then
    /// restore the full list by conjugation.
    pub reduce_first_generator: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_nodes: DEFAULT_MAX_SEARCH_NODES, reduce_first_generator: false }
    }
}

pub fn enumerate_homs(p: &Presentation, g: &FinGroup) -> Result<Vec<GroupHom>> {
    enumerate_homs_with(p, g, EnumerateOptions::default())
}

/// All homomorphisms `Γ → G` in lexicographic order of image tuples.
pub fn enumerate_homs_with(p: &Presentation, g: &FinGroup, opts: EnumerateOptions) -> Result<Vec<GroupHom>> {
    let r = p.rank();
    // relators to test once generator `d` is assigned
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); r.max(1)];
    for rel in &p.relators {
        if let Some(m) = rel.max_generator() {
            due[m].push(rel);
        }
    }
    if r == 0 {
        return Ok(vec![GroupHom { images: vec![] }]);
    }
    let first: Vec<usize> = if opts.reduce_first_generator {
        g.conjugacy_classes().iter().map(|c| c.representative).collect()
    } else {
        (0..g.order()).collect()
    };
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut cur = vec![0usize; r];
    search(g, &due, &first, 0, &mut cur, &mut nodes, opts.max_nodes, &mut out)?;
    if opts.reduce_first_generator {
        let mut all: Vec<GroupHom> = out
            .iter()
            .flat_map(|h| (0..g.order()).map(move |k| h.conjugate(g, k)))
            .collect();
        all.sort();
        all.dedup();
        out = all;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &FinGroup,
    due: &[Vec<&Word>],
    first: &[usize],
    depth: usize,
    cur: &mut Vec<usize>,
    nodes: &mut u64,
    cap: u64,
    out: &mut Vec<GroupHom>,
) -> Result<()> {
    let all: Vec<usize>;
    let candidates: &[usize] = if depth == 0 {
        first
    } else {
        all = (0..g.order()).collect();
        &all
    };
    for &x in candidates {
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::SearchNodeCap(cap));
        }
        cur[depth] = x;
        let ok = due[depth].iter().all(|w| evaluate_word(w, &cur[..=depth], g) == Ok(g.identity()));
        if !ok {
            continue;
        }
        if depth + 1 == cur.len() {
            out.push(GroupHom { images: cur.clone() });
        } else {
            search(g, due, first, depth + 1, cur, nodes, cap, out)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer: Vec<usize>,
}

/// Orbits of a `G`-action on `{0..n-1}`. Representatives are minimal indices.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub orbits: Vec<Orbit>,
    pub orbit_of: Vec<usize>,
    /// For each point `p`, the least `k` with `k · rep = p`.
    pub transporter: Vec<usize>,
}

impl Orbits {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

pub fn action_orbits(n: usize, g: &FinGroup, act: impl Fn(usize, usize) -> usize) -> Orbits {
    let mut orbit_of = vec![usize::MAX; n];
    let mut transporter = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for p in 0..n {
        if orbit_of[p] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = Vec::new();
        let mut stabilizer = Vec::new();
        for k in 0..g.order() {
            let q = act(k, p);
            if q == p {
                stabilizer.push(k);
            }
            if orbit_of[q] == usize::MAX {
                orbit_of[q] = id;
                transporter[q] = k;
                members.push(q);
            }
        }
        members.sort_unstable();
        orbits.push(Orbit { representative: p, members, stabilizer });
    }
    Orbits { orbits, orbit_of, transporter }
}

/// Orbits of `G` acting on a conjugation-closed list of homs by `ρ ↦ gρg⁻¹`.
pub fn conjugation_orbits(homs: &[GroupHom], g: &FinGroup) -> Orbits {
    let index: HashMap<&GroupHom, usize> = homs.iter().enumerate().map(|(i, h)| (h, i)).collect();
    action_orbits(homs.len(), g, |k, p| {
        let c = homs[p].conjugate(g, k);
        *index.get(&c).expect("hom list is closed under conjugation")
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiCheck {
    Ok,
    Counterexample { hom: GroupHom, relator: usize },
}

/// Check that `ρ ∘ φ` satisfies the relators for every `ρ ∈ Hom(Γ, G)`.
pub fn validate_phi(p: &Presentation, phi: &Endomorphism, g: &FinGroup) -> Result<PhiCheck> {
    validate_phi_on(&enumerate_homs(p, g)?, p, phi, g)
}

pub fn validate_phi_on(homs: &[GroupHom], p: &Presentation, phi: &Endomorphism, g: &FinGroup) -> Result<PhiCheck> {
    for h in homs {
        let pulled = phi.pull_back(&h.images, g)?;
        for (ri, rel) in p.relators.iter().enumerate() {
            if evaluate_word(rel, &pulled, g)? != g.identity() {
                return Ok(PhiCheck::Counterexample { hom: h.clone(), relator: ri });
            }
        }
    }
    Ok(PhiCheck::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{mapping_torus, Permutation};

    fn s3() -> FinGroup {
        let gens = [Permutation::parse_cycles(3, "(0 1)").unwrap(), Permutation::parse_cycles(3, "(0 1 2)").unwrap()];
        FinGroup::from_permutations(3, &gens).unwrap()
    }

    #[test]
    fn hom_counts() {
        let g = s3();
        assert_eq!(enumerate_homs(&Presentation::free(2), &g).unwrap().len(), 36);
        let p = Presentation::parse(&["a"], &["a^2"]).unwrap();
        assert_eq!(enumerate_homs(&p, &g).unwrap().len(), 4);
        let p = Presentation::parse(&["a"], &["a"]).unwrap();
        assert_eq!(enumerate_homs(&p, &g).unwrap().len(), 1);
        assert_eq!(enumerate_homs(&Presentation::free(0), &g).unwrap().len(), 1);
    }

    #[test]
    fn lex_order_and_cap() {
        let g = s3();
        let hs = enumerate_homs(&Presentation::free(2), &g).unwrap();
        assert!(hs.windows(2).all(|w| w[0] < w[1]));
        let opts = EnumerateOptions { max_nodes: 10, reduce_first_generator: false };
        assert!(matches!(enumerate_homs_with(&Presentation::free(2), &g, opts), Err(Error::SearchNodeCap(10))));
    }

    #[test]
    fn reduced_search_matches_full() {
        let g = s3();
        let p = Presentation::parse(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        let full = enumerate_homs(&p, &g).unwrap();
        let opts = EnumerateOptions { reduce_first_generator: true, ..Default::default() };
        assert_eq!(enumerate_homs_with(&p, &g, opts).unwrap(), full);
    }

    #[test]
    fn z_orbits_are_classes() {
        let g = s3();
        let hs = enumerate_homs(&Presentation::free(1), &g).unwrap();
        let o = conjugation_orbits(&hs, &g);
        let st: Vec<usize> = o.orbits.iter().map(|o| o.stabilizer.len()).collect();
        assert_eq!(st, vec![6, 2, 3]);
    }

    #[test]
    fn free_pairs_up_to_conjugacy() {
        let g = s3();
        let hs = enumerate_homs(&Presentation::free(2), &g).unwrap();
        let o = conjugation_orbits(&hs, &g);
        // brute force: canonical form = lexicographically least conjugate
        let mut canon: Vec<(usize, usize)> = Vec::new();
        for a in 0..6 {
            for b in 0..6 {
                let m = (0..6).map(|k| (g.conj(k, a), g.conj(k, b))).min().unwrap();
                canon.push(m);
            }
        }
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), 11);
        assert_eq!(o.len(), 11);
        let total: usize = o.orbits.iter().map(|x| 6 / x.stabilizer.len()).sum();
        assert_eq!(total, 36);
        for (p, h) in hs.iter().enumerate() {
            let r = &hs[o.orbits[o.orbit_of[p]].representative];
            assert_eq!(&r.conjugate(&g, o.transporter[p]), h);
        }
    }

    #[test]
    fn trivial_gamma_orbit() {
        let g = s3();
        let hs = enumerate_homs(&Presentation::free(0), &g).unwrap();
        let o = conjugation_orbits(&hs, &g);
        assert_eq!(o.len(), 1);
        assert_eq!(o.orbits[0].stabilizer.len(), 6);
    }

    #[test]
    fn phi_validation() {
        let g = s3();
        let p = Presentation::free(2);
        let phi = Endomorphism::parse(&p, &[("a", "b"), ("b", "a b")]).unwrap();
        assert_eq!(validate_phi(&p, &phi, &g).unwrap(), PhiCheck::Ok);
        let p = Presentation::parse(&["a"], &["a^2"]).unwrap();
        let phi = Endomorphism::parse(&p, &[("a", "a^3")]).unwrap();
        assert_eq!(validate_phi(&p, &phi, &g).unwrap(), PhiCheck::Ok);
        let p = Presentation::parse(&["a", "b"], &["a^2", "b^3"]).unwrap();
        let phi = Endomorphism::parse(&p, &[("a", "b")]).unwrap();
        assert!(matches!(validate_phi(&p, &phi, &g).unwrap(), PhiCheck::Counterexample { .. }));
    }

    #[test]
    fn torus_homs_satisfy_twisted_relation() {
        let g = s3();
        let p = Presentation::free(2);
        let phi = Endomorphism::parse(&p, &[("a", "b"), ("b", "a")]).unwrap();
        let t = mapping_torus(&p, &phi);
        let hs = enumerate_homs(&t, &g).unwrap();
        assert!(!hs.is_empty());
        for h in &hs {
            let rho = &h.images[..2];
            let k = h.images[2];
            let pulled = phi.pull_back(rho, &g).unwrap();
            for x in 0..2 {
                assert_eq!(pulled[x], g.conj(k, rho[x]));
            }
        }
    }
}
