use std::fmt;

use super::fingroup::FinGroup;
use crate::error::{Error, Result};

/// A word in the generators of a presentation; exponents are ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(i: usize) -> Self {
        Word { letters: vec![(i, 1)] }
    }

    pub fn power(i: usize, e: i64) -> Self {
        let s = if e < 0 { -1 } else { 1 };
        Word { letters: vec![(i, s); e.unsigned_abs() as usize] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Cancel adjacent `x x⁻¹` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.0).max()
    }

    /// Replace every generator `x` by `images[x]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for &(g, e) in &self.letters {
            let w = if e > 0 { images[g].clone() } else { images[g].inverse() };
            out.letters.extend(w.letters);
        }
        out
    }

    /// Parse `"a b a^-1 b^-1"`, `"a^2"`; `""` and `"1"` denote the empty word.
    pub fn parse(s: &str, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Word(format!("bad exponent in {tok:?}")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Word(format!("unknown generator {name:?} in {s:?}")))?;
            letters.extend(Word::power(g, exp).letters);
        }
        Ok(Word { letters })
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                let n = names.get(g).cloned().unwrap_or_else(|| format!("x{g}"));
                if e > 0 {
                    n
                } else {
                    format!("{n}^-1")
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// Left-to-right product of the letter images.
pub fn evaluate_word(w: &Word, images: &[usize], g: &FinGroup) -> Result<usize> {
    let mut acc = g.identity();
    for &(i, e) in &w.letters {
        let x = *images.get(i).ok_or(Error::GeneratorOutOfRange(i))?;
        acc = g.mul(acc, if e > 0 { x } else { g.inv(x) });
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation { generators, relators };
        for r in &p.relators {
            if let Some(m) = r.max_generator() {
                if m >= p.generators.len() {
                    return Err(Error::GeneratorOutOfRange(m));
                }
            }
        }
        Ok(p)
    }

    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| Word::parse(r, &names)).collect::<Result<Vec<_>>>()?;
        Presentation::new(names, rels)
    }

    pub fn free(rank: usize) -> Self {
        let names = (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Presentation { generators: names, relators: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, &self.generators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.display(&self.generators)).collect();
        write!(f, "<{} | {}>", self.generators.join(", "), if rels.is_empty() { "-".into() } else { rels.join(", ") })
    }
}

/// An endomorphism of a presented group, given by one image word per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    pub images: Vec<Word>,
}

impl Endomorphism {
    pub fn identity(p: &Presentation) -> Self {
        Endomorphism { images: (0..p.rank()).map(Word::generator).collect() }
    }

    pub fn new(p: &Presentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != p.rank() {
            return Err(Error::Word(format!("endomorphism needs {} images, got {}", p.rank(), images.len())));
        }
        for w in &images {
            if let Some(m) = w.max_generator() {
                if m >= p.rank() {
                    return Err(Error::GeneratorOutOfRange(m));
                }
            }
        }
        Ok(Endomorphism { images })
    }

    /// Parse images by generator name; missing generators map to themselves.
    pub fn parse(p: &Presentation, images: &[(&str, &str)]) -> Result<Self> {
        let mut out = Self::identity(p);
        for (name, w) in images {
            let i = p
                .generators
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Word(format!("unknown generator {name:?}")))?;
            out.images[i] = p.parse_word(w)?;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters == [(i, 1)])
    }

    /// Image of a hom under precomposition: `x ↦ ρ(φ(x))`.
    pub fn pull_back(&self, images: &[usize], g: &FinGroup) -> Result<Vec<usize>> {
        self.images.iter().map(|w| evaluate_word(w, images, g)).collect()
    }
}

/// `⟨Γ, t | relators of Γ, t x t⁻¹ φ(x)⁻¹ for each generator x⟩`; `t` is the last generator.
pub fn mapping_torus(p: &Presentation, phi: &Endomorphism) -> Presentation {
    let mut names = p.generators.clone();
    let mut t_name = "t".to_string();
    while names.contains(&t_name) {
        t_name.push('\'');
    }
    names.push(t_name);
    let t = p.rank();
    let mut relators = p.relators.clone();
    for (x, img) in phi.images.iter().enumerate() {
        let w = Word { letters: vec![(t, 1), (x, 1), (t, -1)] };
        relators.push(w.concat(&img.inverse()));
    }
    Presentation { generators: names, relators }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Permutation;

    fn s3() -> FinGroup {
        let gens = [Permutation::parse_cycles(3, "(0 1)").unwrap(), Permutation::parse_cycles(3, "(0 1 2)").unwrap()];
        FinGroup::from_permutations(3, &gens).unwrap()
    }

    #[test]
    fn evaluate_aba_inv() {
        let g = s3();
        let p = Presentation::free(2);
        let a = g.index_of(&Permutation::parse_cycles(3, "(0 1)").unwrap()).unwrap();
        let b = g.index_of(&Permutation::parse_cycles(3, "(0 1 2)").unwrap()).unwrap();
        let w = p.parse_word("a b a^-1").unwrap();
        let r = evaluate_word(&w, &[a, b], &g).unwrap();
        // (0 1)(0 1 2)(0 1): 0→1→2→2, 2→2→0→1, 1→0→1→0
        assert_eq!(g.element(r).to_string(), "(0 2 1)");
        assert_eq!(evaluate_word(&Word::empty(), &[a, b], &g).unwrap(), g.identity());
        let w = p.parse_word("a a^-1").unwrap();
        assert_eq!(evaluate_word(&w, &[b, a], &g).unwrap(), g.identity());
        assert!(evaluate_word(&Word::generator(3), &[a], &g).is_err());
    }

    #[test]
    fn parse_words() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(Word::parse("a^2", &names).unwrap().letters, vec![(0, 1), (0, 1)]);
        assert_eq!(Word::parse("b^-2 a", &names).unwrap().letters, vec![(1, -1), (1, -1), (0, 1)]);
        assert!(Word::parse("1", &names).unwrap().is_empty());
        assert!(Word::parse("c", &names).is_err());
        assert!(Word::parse("a^x", &names).is_err());
        assert!(Word::parse("a a^-1 b", &names).unwrap().reduced() == Word::generator(1));
    }

    #[test]
    fn torus_shapes() {
        let p = Presentation::parse(&["a"], &[]).unwrap();
        let phi = Endomorphism::parse(&p, &[("a", "a^2")]).unwrap();
        let m = mapping_torus(&p, &phi);
        assert_eq!(m.to_string(), "<a, t | t a t^-1 a^-1 a^-1>");
        let m = mapping_torus(&p, &Endomorphism::identity(&p));
        assert_eq!(m.to_string(), "<a, t | t a t^-1 a^-1>");
        let triv = Presentation::free(0);
        let m = mapping_torus(&triv, &Endomorphism::identity(&triv));
        assert_eq!(m.to_string(), "<t | ->");
    }

    #[test]
    fn endomorphism_rejects_unknown() {
        let p = Presentation::parse(&["a"], &["a^2"]).unwrap();
        assert!(Endomorphism::parse(&p, &[("a", "b")]).is_err());
        assert!(Endomorphism::parse(&p, &[("b", "a")]).is_err());
    }
}
