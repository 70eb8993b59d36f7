use std::sync::Arc;

use super::algebra::FinDimAlgebra;
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, vec_sub, Ctx, CycNumber, FieldMatrix, RowSpace, Vector};

/// An `(A, B)`-bimodule: one matrix per basis element of `A` acting on the
/// left and one per basis element of `B` acting on the right.
#[derive(Clone, Debug)]
pub struct Bimodule {
    left_alg: Arc<FinDimAlgebra>,
    right_alg: Arc<FinDimAlgebra>,
    dim: usize,
    left: Vec<FieldMatrix>,
    right: Vec<FieldMatrix>,
}

pub(crate) fn same_algebra(a: &Arc<FinDimAlgebra>, b: &Arc<FinDimAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn combine(ctx: &Ctx, dim: usize, mats: &[FieldMatrix], coeffs: &[CycNumber]) -> FieldMatrix {
    let mut out = FieldMatrix::zeros(ctx, dim, dim);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.mat_add(&m.scale(c)).expect("same shape");
        }
    }
    out
}

impl Bimodule {
    pub fn new(
        left_alg: &Arc<FinDimAlgebra>,
        right_alg: &Arc<FinDimAlgebra>,
        dim: usize,
        left: Vec<FieldMatrix>,
        right: Vec<FieldMatrix>,
    ) -> Result<Self> {
        let b = Self::new_unchecked(left_alg, right_alg, dim, left, right);
        b.verify()?;
        Ok(b)
    }

    pub(crate) fn new_unchecked(
        left_alg: &Arc<FinDimAlgebra>,
        right_alg: &Arc<FinDimAlgebra>,
        dim: usize,
        left: Vec<FieldMatrix>,
        right: Vec<FieldMatrix>,
    ) -> Self {
        Bimodule { left_alg: left_alg.clone(), right_alg: right_alg.clone(), dim, left, right }
    }

    /// Unital, multiplicative on basis pairs, and the two actions commute.
    pub fn verify(&self) -> Result<()> {
        let ctx = self.left_alg.ctx();
        if self.left.len() != self.left_alg.dim() || self.right.len() != self.right_alg.dim() {
            return Err(Error::AlgebraAxiom("action matrix count differs from algebra dimension".into()));
        }
        if !self.left_action(self.left_alg.unit()).is_identity() {
            return Err(Error::AlgebraAxiom("left unit does not act as identity".into()));
        }
        if !self.right_action(self.right_alg.unit()).is_identity() {
            return Err(Error::AlgebraAxiom("right unit does not act as identity".into()));
        }
        let la = &self.left_alg;
        for i in 0..la.dim() {
            for j in 0..la.dim() {
                let prod = sparse_to_dense(ctx, la.dim(), la.basis_product(i, j));
                if self.left[i].mat_mul(&self.left[j])? != self.left_action(&prod) {
                    return Err(Error::AlgebraAxiom(format!("left action not multiplicative at ({i}, {j})")));
                }
            }
        }
        let ra = &self.right_alg;
        for i in 0..ra.dim() {
            for j in 0..ra.dim() {
                // (q e_i) e_j = q (e_i e_j)
                let prod = sparse_to_dense(ctx, ra.dim(), ra.basis_product(i, j));
                if self.right[j].mat_mul(&self.right[i])? != self.right_action(&prod) {
                    return Err(Error::AlgebraAxiom(format!("right action not multiplicative at ({i}, {j})")));
                }
            }
        }
        for l in &self.left {
            for r in &self.right {
                if l.mat_mul(r)? != r.mat_mul(l)? {
                    return Err(Error::AlgebraAxiom("left and right actions do not commute".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_algebra(&self) -> &Arc<FinDimAlgebra> {
        &self.left_alg
    }

    pub fn right_algebra(&self) -> &Arc<FinDimAlgebra> {
        &self.right_alg
    }

    pub fn left_basis(&self, i: usize) -> &FieldMatrix {
        &self.left[i]
    }

    pub fn right_basis(&self, i: usize) -> &FieldMatrix {
        &self.right[i]
    }

    pub fn left_action(&self, a: &[CycNumber]) -> FieldMatrix {
        combine(self.left_alg.ctx(), self.dim, &self.left, a)
    }

    pub fn right_action(&self, b: &[CycNumber]) -> FieldMatrix {
        combine(self.left_alg.ctx(), self.dim, &self.right, b)
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &Arc<FinDimAlgebra>) -> Self {
        let left = (0..a.dim()).map(|i| a.left_matrix(i)).collect();
        let right = (0..a.dim()).map(|i| a.right_matrix(i)).collect();
        Self::new_unchecked(a, a, a.dim(), left, right)
    }

    /// `K^n` as a bimodule over the one-dimensional algebra `K`.
    pub fn vector_space(k: &Arc<FinDimAlgebra>, n: usize) -> Result<Self> {
        if k.dim() != 1 {
            return Err(Error::DimensionMismatch("vector_space needs the ground field as algebra".into()));
        }
        let id = FieldMatrix::identity(k.ctx(), n);
        Ok(Self::new_unchecked(k, k, n, vec![id.clone()], vec![id]))
    }
}

pub(crate) fn sparse_to_dense(ctx: &Ctx, n: usize, s: &[(usize, CycNumber)]) -> Vector {
    let mut v = vec![CycNumber::zero(ctx); n];
    for (k, c) in s {
        v[*k] = c.clone();
    }
    v
}

/// `A` with left multiplication and right action `q · a = q θ(a)`; the columns
/// of `theta` are the images of the basis elements.
pub fn twist_bimodule(a: &Arc<FinDimAlgebra>, theta: &FieldMatrix) -> Result<Bimodule> {
    let n = a.dim();
    let ctx = a.ctx();
    if theta.rows() != n || theta.cols() != n {
        return Err(Error::DimensionMismatch("theta must be square of the algebra dimension".into()));
    }
    if theta.apply(a.unit())? != a.unit() {
        return Err(Error::NotAHomomorphism("theta is not unital".into()));
    }
    let images: Vec<Vector> = (0..n).map(|j| theta.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = theta.apply(&sparse_to_dense(ctx, n, a.basis_product(i, j)))?;
            if lhs != a.mul(&images[i], &images[j]) {
                return Err(Error::NotAHomomorphism(format!("theta not multiplicative at ({i}, {j})")));
            }
        }
    }
    let reg_right: Vec<FieldMatrix> = (0..n).map(|k| a.right_matrix(k)).collect();
    let left = (0..n).map(|i| a.left_matrix(i)).collect();
    let right = images.iter().map(|im| combine(ctx, n, &reg_right, im)).collect();
    Bimodule::new(a, a, n, left, right)
}

/// A quotient `K^n / R` with canonical coordinates on the non-pivot columns of `R`.
#[derive(Clone, Debug)]
pub struct Quotient {
    relations: RowSpace,
    free: Vec<usize>,
}

impl Quotient {
    pub fn new(relations: RowSpace) -> Self {
        let free = relations.free_columns();
        Quotient { relations, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn relations(&self) -> &RowSpace {
        &self.relations
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[CycNumber]) -> Vector {
        let r = self.relations.reduce(v);
        self.free.iter().map(|&c| r[c].clone()).collect()
    }

    /// The chosen lift: coordinates placed on the free columns.
    pub fn lift(&self, c: &[CycNumber]) -> Vector {
        let ctx = self.relations.ctx();
        let mut v = vec![CycNumber::zero(ctx); self.ambient_dim()];
        for (&col, x) in self.free.iter().zip(c) {
            v[col] = x.clone();
        }
        v
    }

    pub fn projection_matrix(&self) -> FieldMatrix {
        let ctx = self.relations.ctx();
        let n = self.ambient_dim();
        let cols: Vec<Vector> = (0..n).map(|i| self.project(&unit_vector(ctx, n, i))).collect();
        FieldMatrix::from_columns(ctx, self.dim(), &cols)
    }

    pub fn section_matrix(&self) -> FieldMatrix {
        let ctx = self.relations.ctx();
        let cols: Vec<Vector> = (0..self.dim()).map(|k| self.lift(&unit_vector(ctx, self.dim(), k))).collect();
        FieldMatrix::from_columns(ctx, self.ambient_dim(), &cols)
    }
}

/// `Q ⊗_B P` realized as a quotient of `Q ⊗ P` (index `i_Q · dim P + i_P`).
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub bimodule: Bimodule,
    pub quotient: Quotient,
    pub q_dim: usize,
    pub p_dim: usize,
}

impl TensorProduct {
    pub fn raw_dim(&self) -> usize {
        self.q_dim * self.p_dim
    }
}

fn apply_left_factor(m: &FieldMatrix, v: &[CycNumber], np: usize) -> Vector {
    let id = FieldMatrix::identity(m.ctx(), np);
    crate::exactfield::kron_apply(&[m, &id], v).expect("shape")
}

fn apply_right_factor(m: &FieldMatrix, v: &[CycNumber], nq: usize) -> Vector {
    let id = FieldMatrix::identity(m.ctx(), nq);
    crate::exactfield::kron_apply(&[&id, m], v).expect("shape")
}

pub fn bimodule_tensor(q: &Bimodule, p: &Bimodule) -> Result<TensorProduct> {
    if !same_algebra(&q.right_alg, &p.left_alg) {
        return Err(Error::AlgebraAxiom("inner algebras of the tensor product differ".into()));
    }
    let ctx = q.left_alg.ctx().clone();
    let (nq, np) = (q.dim, p.dim);
    let raw = nq * np;
    let mut rel = RowSpace::new(&ctx, raw);
    for b in 0..q.right_alg.dim() {
        let rq = &q.right[b];
        let lp = &p.left[b];
        for i in 0..nq {
            for j in 0..np {
                // (q_i b) ⊗ p_j − q_i ⊗ (b p_j)
                let mut v = vec![CycNumber::zero(&ctx); raw];
                for k in 0..nq {
                    let c = rq.get(k, i);
                    if !c.is_zero() {
                        v[k * np + j] += c;
                    }
                }
                for k in 0..np {
                    let c = lp.get(k, j);
                    if !c.is_zero() {
                        v[i * np + k] -= c;
                    }
                }
                rel.insert(&v);
            }
        }
    }
    let quotient = Quotient::new(rel);
    let d = quotient.dim();
    let induced = |m: &FieldMatrix, on_left: bool| {
        let cols: Vec<Vector> = (0..d)
            .map(|k| {
                let x = quotient.lift(&unit_vector(&ctx, d, k));
                let y = if on_left { apply_left_factor(m, &x, np) } else { apply_right_factor(m, &x, nq) };
                quotient.project(&y)
            })
            .collect();
        FieldMatrix::from_columns(&ctx, d, &cols)
    };
    let left = q.left.iter().map(|m| induced(m, true)).collect();
    let right = p.right.iter().map(|m| induced(m, false)).collect();
    let bimodule = Bimodule::new_unchecked(&q.left_alg, &p.right_alg, d, left, right);
    Ok(TensorProduct { bimodule, quotient, q_dim: nq, p_dim: np })
}

/// Raw representative of `a x − x a` for `x` given in tensor-product quotient coordinates.
pub(crate) fn raw_commutator(t: &TensorProduct, q: &Bimodule, p: &Bimodule, a: usize, x: &[CycNumber]) -> Vector {
    let lx = t.quotient.lift(x);
    let l = apply_left_factor(&q.left[a], &lx, t.p_dim);
    let r = apply_right_factor(&p.right[a], &lx, t.q_dim);
    vec_sub(&l, &r)
}
