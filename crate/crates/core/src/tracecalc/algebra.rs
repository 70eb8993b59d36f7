use std::collections::BTreeMap;

use crate::charstack::ActionGroupoid;
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, Ctx, CycNumber, FieldMatrix, Vector};
use crate::groups::FinGroup;

type Sparse = Vec<(usize, CycNumber)>;

const VERIFY_LIMIT: usize = 128;

fn accumulate(m: &mut BTreeMap<usize, CycNumber>, k: usize, v: CycNumber) {
    let e = m.entry(k).or_insert_with(|| CycNumber::zero(v.ctx()));
    *e += &v;
    if e.is_zero() {
        m.remove(&k);
    }
}

/// A finite-dimensional associative unital algebra given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct FinDimAlgebra {
    ctx: Ctx,
    labels: Vec<String>,
    /// `table[i * dim + j]` = sparse expansion of `e_i e_j`.
    table: Vec<Sparse>,
    unit: Vector,
}

impl FinDimAlgebra {
    /// Build from structure constants; associativity and unit laws are checked on all basis triples.
    pub fn new(ctx: &Ctx, labels: Vec<String>, products: Vec<Vector>, unit: Vector) -> Result<Self> {
        let n = labels.len();
        if products.len() != n * n || unit.len() != n || products.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch("structure constants have the wrong shape".into()));
        }
        let table = products
            .into_iter()
            .map(|p| p.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        let a = FinDimAlgebra { ctx: ctx.clone(), labels, table, unit };
        a.verify()?;
        Ok(a)
    }

    fn from_sparse_unchecked(ctx: &Ctx, labels: Vec<String>, table: Vec<Sparse>, unit: Vector) -> Self {
        FinDimAlgebra { ctx: ctx.clone(), labels, table, unit }
    }

    pub fn verify(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let e = unit_vector(&self.ctx, n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::AlgebraAxiom(format!("unit law fails at {}", self.labels[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let mut left = BTreeMap::new();
                    for (m, c) in ij {
                        for (r, d) in self.basis_product(*m, k) {
                            accumulate(&mut left, *r, c * d);
                        }
                    }
                    let mut right = BTreeMap::new();
                    for (m, c) in self.basis_product(j, k) {
                        for (r, d) in self.basis_product(i, *m) {
                            accumulate(&mut right, *r, c * d);
                        }
                    }
                    if left != right {
                        return Err(Error::AlgebraAxiom(format!(
                            "associativity fails at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[CycNumber] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Sparse {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &[CycNumber], b: &[CycNumber]) -> Vector {
        let n = self.dim();
        let mut out = vec![CycNumber::zero(&self.ctx); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_matrix(&self, i: usize) -> FieldMatrix {
        let n = self.dim();
        let mut m = FieldMatrix::zeros(&self.ctx, n, n);
        for j in 0..n {
            for (k, c) in self.basis_product(i, j) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_matrix(&self, i: usize) -> FieldMatrix {
        let n = self.dim();
        let mut m = FieldMatrix::zeros(&self.ctx, n, n);
        for j in 0..n {
            for (k, c) in self.basis_product(j, i) {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// `a ↦ tr(L_a)` on basis elements.
    fn basis_trace(&self, i: usize) -> CycNumber {
        let mut t = CycNumber::zero(&self.ctx);
        for j in 0..self.dim() {
            for (k, c) in self.basis_product(i, j) {
                if *k == j {
                    t += c;
                }
            }
        }
        t
    }

    /// Gram matrix of the trace form `(a, b) ↦ tr(L_{ab})`.
    pub fn trace_form(&self) -> FieldMatrix {
        let n = self.dim();
        let traces: Vec<CycNumber> = (0..n).map(|i| self.basis_trace(i)).collect();
        let mut g = FieldMatrix::zeros(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut t = CycNumber::zero(&self.ctx);
                for (k, c) in self.basis_product(i, j) {
                    t += &(c * &traces[*k]);
                }
                g.set(i, j, t);
            }
        }
        g
    }

    /// Nondegeneracy of the trace form, which in characteristic zero implies semisimplicity.
    pub fn check_semisimple(&self) -> Result<()> {
        let r = self.trace_form().rank();
        if r != self.dim() {
            return Err(Error::AlgebraAxiom(format!("trace form has rank {r} < {}", self.dim())));
        }
        Ok(())
    }

    /// `K^k` with componentwise product.
    pub fn diagonal(ctx: &Ctx, k: usize) -> Self {
        let mut table = vec![Vec::new(); k * k];
        for i in 0..k {
            table[i * k + i] = vec![(i, CycNumber::one(ctx))];
        }
        let labels = (0..k).map(|i| format!("e{i}")).collect();
        Self::from_sparse_unchecked(ctx, labels, table, vec![CycNumber::one(ctx); k])
    }

    /// `Mat_n(K)` with matrix units `E_ij` at index `i n + j`.
    pub fn matrix_algebra(ctx: &Ctx, n: usize) -> Self {
        let d = n * n;
        let mut table = vec![Vec::new(); d * d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[(i * n + j) * d + (j * n + l)] = vec![(i * n + l, CycNumber::one(ctx))];
                }
            }
        }
        let labels = (0..d).map(|x| format!("E{}{}", x / n, x % n)).collect();
        let mut unit = vec![CycNumber::zero(ctx); d];
        for i in 0..n {
            unit[i * n + i] = CycNumber::one(ctx);
        }
        Self::from_sparse_unchecked(ctx, labels, table, unit)
    }
}

/// Algebra of the action groupoid: basis arrows `(x, h): x → h·x` at index
/// `x |G| + h`; the product of composable arrows is their composite.
pub fn groupoid_algebra(base: &dyn ActionGroupoid, ctx: &Ctx) -> FinDimAlgebra {
    let g = base.group();
    let (no, ng) = (base.object_count(), g.order());
    let d = no * ng;
    let mut table = vec![Vec::new(); d * d];
    let one = CycNumber::one(ctx);
    for y in 0..no {
        for k in 0..ng {
            for x in 0..no {
                for h in 0..ng {
                    if base.act(h, x) == y {
                        table[(y * ng + k) * d + (x * ng + h)] = vec![(x * ng + g.mul(k, h), one.clone())];
                    }
                }
            }
        }
    }
    let labels = (0..d).map(|i| format!("({}, {})", i / ng, g.element(i % ng))).collect();
    let mut unit = vec![CycNumber::zero(ctx); d];
    for x in 0..no {
        unit[x * ng + g.identity()] = one.clone();
    }
    let a = FinDimAlgebra::from_sparse_unchecked(ctx, labels, table, unit);
    if d <= VERIFY_LIMIT {
        a.verify().expect("groupoid composition is associative and unital");
    }
    a
}

/// Group algebra `K[G]` with basis indexed like the group's elements.
pub fn group_algebra(g: &FinGroup, ctx: &Ctx) -> FinDimAlgebra {
    let n = g.order();
    let mut table = vec![Vec::new(); n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = vec![(g.mul(a, b), CycNumber::one(ctx))];
        }
    }
    let labels = g.elements().iter().map(|p| p.to_string()).collect();
    FinDimAlgebra::from_sparse_unchecked(ctx, labels, table, unit_vector(ctx, n, g.identity()))
}
