use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, …, m-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation { images: (0..m as u32).collect() }
    }

    /// Build from disjoint or overlapping cycles; cycles compose right to left.
    pub fn from_cycles(m: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut p = Self::identity(m);
        for c in cycles.iter().rev() {
            let mut img: Vec<u32> = (0..m as u32).collect();
            for (i, &x) in c.iter().enumerate() {
                if x as usize >= m {
                    return Err(Error::InvalidPermutation(format!("point {x} outside degree {m}")));
                }
                img[x as usize] = c[(i + 1) % c.len()];
            }
            let mut dup = c.clone();
            dup.sort_unstable();
            dup.dedup();
            if dup.len() != c.len() {
                return Err(Error::InvalidPermutation(format!("repeated point in cycle {c:?}")));
            }
            p = p.compose(&Permutation { images: img });
        }
        Ok(p)
    }

    /// Parse cycle notation such as `"(0 1)(2 3)"`; `"()"` or `""` is the identity.
    pub fn parse_cycles(m: usize, s: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::InvalidPermutation(format!("expected '(' in {s:?}")));
            }
            let end = rest
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {s:?}")))?;
            let body = &rest[1..end];
            let pts: std::result::Result<Vec<u32>, _> =
                body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(str::parse).collect();
            let pts = pts.map_err(|_| Error::InvalidPermutation(format!("bad point in {s:?}")))?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = rest[end + 1..].trim_start();
        }
        Self::from_cycles(m, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut r = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        Permutation { images: r }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for s in 0..self.degree() {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            let mut c = vec![s as u32];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x as u32);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Permutation::parse_cycles(4, "(0 1)(2 3)").unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2]);
        assert_eq!(p.to_string(), "(0 1)(2 3)");
        assert!(Permutation::parse_cycles(3, "()").unwrap().is_identity());
        assert!(Permutation::parse_cycles(3, "(0 3)").is_err());
        assert!(Permutation::parse_cycles(3, "(0 0)").is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn compose_inverse() {
        let p = Permutation::parse_cycles(3, "(0 1 2)").unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.compose(&p).compose(&p).is_identity());
    }
}
