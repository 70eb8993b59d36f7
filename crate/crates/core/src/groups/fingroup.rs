use std::collections::{HashMap, VecDeque};

use super::perm::Permutation;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_GROUP_ORDER: usize = 5040;
const TABLE_LIMIT: usize = 1024;

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub centralizer_order: usize,
}

/// A finite permutation group with its full element list.
///
/// Elements are indexed by their position in the lexicographic order of image
/// arrays; index 0 is always the identity.
#[derive(Clone, Debug)]
pub struct FinGroup {
    degree: usize,
    generators: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FinGroup {}

impl FinGroup {
    pub fn from_permutations(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::from_permutations_capped(degree, generators, DEFAULT_MAX_GROUP_ORDER)
    }

    /// Orbit-closure enumeration of the group generated by `generators`.
    pub fn from_permutations_capped(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!("{g} has degree {} not {degree}", g.degree())));
            }
            Permutation::new(g.images().to_vec())?;
        }
        let id = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(Error::GroupOrderCap(cap));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_keys().collect();
        elements.sort();
        let index: HashMap<Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = elements.len();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)] as u32);
                }
            }
            t
        });
        let gens = generators.iter().map(|g| index[g]).collect();
        let mut group = FinGroup {
            degree,
            generators: gens,
            elements,
            index,
            table,
            inverses,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|g| self.conj(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(ConjugacyClass {
                representative: x,
                centralizer_order: n / members.len(),
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    /// First element of maximal order, searching the generators before the rest.
    pub fn cyclic_generator(&self) -> Option<usize> {
        let n = self.order();
        self.generators
            .iter()
            .copied()
            .chain(0..n)
            .find(|&g| self.element_order(g) == n)
    }

    /// Centralizer of a set of elements.
    pub fn centralizer(&self, xs: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&g| xs.iter().all(|&x| self.conj(g, x) == x)).collect()
    }
}

/// `group_from_permutations` with the default order cap.
pub fn group_from_permutations(degree: usize, generators: &[Permutation]) -> Result<FinGroup> {
    FinGroup::from_permutations(degree, generators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(m: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(m, s).unwrap()
    }

    pub(crate) fn s3() -> FinGroup {
        FinGroup::from_permutations(3, &[perm(3, "(0 1)"), perm(3, "(0 1 2)")]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s3().order(), 6);
        assert_eq!(FinGroup::from_permutations(3, &[perm(3, "(0 1 2)")]).unwrap().order(), 3);
        assert_eq!(FinGroup::from_permutations(3, &[]).unwrap().order(), 1);
    }

    #[test]
    fn order_cap() {
        let gens = [perm(5, "(0 1)"), perm(5, "(0 1 2 3 4)")];
        assert!(matches!(
            FinGroup::from_permutations_capped(5, &gens, 100),
            Err(Error::GroupOrderCap(100))
        ));
        assert_eq!(FinGroup::from_permutations(5, &gens).unwrap().order(), 120);
    }

    #[test]
    fn s3_classes() {
        let g = s3();
        let cl = g.conjugacy_classes();
        let sizes: Vec<usize> = cl.iter().map(|c| c.members.len()).collect();
        let cents: Vec<usize> = cl.iter().map(|c| c.centralizer_order).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(cents, vec![6, 2, 3]);
        for c in cl {
            assert_eq!(c.representative, *c.members.iter().min().unwrap());
        }
    }

    #[test]
    fn abelian_and_trivial_classes() {
        let z3 = FinGroup::from_permutations(3, &[perm(3, "(0 1 2)")]).unwrap();
        assert_eq!(z3.conjugacy_classes().len(), 3);
        assert!(z3.conjugacy_classes().iter().all(|c| c.members.len() == 1));
        let t = FinGroup::from_permutations(2, &[]).unwrap();
        assert_eq!(t.conjugacy_classes().len(), 1);
    }

    #[test]
    fn tables_consistent() {
        let g = s3();
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in 0..6 {
                assert_eq!(g.element(g.mul(a, b)), &g.element(a).compose(g.element(b)));
            }
        }
    }
}
