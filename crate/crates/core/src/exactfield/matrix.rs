use std::fmt;

use super::cyclotomic::{CycNumber, Ctx};
use crate::error::{Error, Result};

pub type Vector = Vec<CycNumber>;

/// Dense matrix over a cyclotomic field; row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    ctx: Ctx,
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} @ zeta({})", self.rows, self.cols, self.ctx.conductor())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.pretty()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> Self {
        FieldMatrix { ctx: ctx.clone(), rows, cols, data: vec![CycNumber::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, CycNumber::one(ctx));
        }
        m
    }

    pub fn scalar(ctx: &Ctx, n: usize, s: &CycNumber) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_rows(ctx: &Ctx, rows: Vec<Vec<CycNumber>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        for x in rows.iter().flatten() {
            if x.ctx().conductor() != ctx.conductor() {
                return Err(Error::ContextMismatch(x.ctx().conductor(), ctx.conductor()));
            }
        }
        Ok(FieldMatrix { ctx: ctx.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(ctx: &Ctx, rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| CycNumber::from_int(ctx, x)).collect())
            .collect();
        Self::from_rows(ctx, v).expect("rectangular integer rows")
    }

    pub fn from_columns(ctx: &Ctx, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(ctx, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNumber {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNumber) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[CycNumber] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ctx.conductor() != other.ctx.conductor() {
            return Err(Error::ContextMismatch(self.ctx.conductor(), other.ctx.conductor()));
        }
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let p = a * b;
                        out.data[i * other.cols + j] += &p;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mat_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycNumber, &CycNumber) -> CycNumber) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ctx.conductor() != other.ctx.conductor() {
            return Err(Error::ContextMismatch(self.ctx.conductor(), other.ctx.conductor()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(FieldMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &CycNumber) -> Self {
        FieldMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mat_trace(&self) -> Result<CycNumber> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("trace of non-square matrix".into()));
        }
        let mut t = CycNumber::zero(&self.ctx);
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        Ok(t)
    }

    /// Kronecker product with index order `(i_A, i_B)` lexicographic.
    pub fn mat_kron(&self, other: &Self) -> Result<Self> {
        if self.ctx.conductor() != other.ctx.conductor() {
            return Err(Error::ContextMismatch(self.ctx.conductor(), other.ctx.conductor()));
        }
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(&self.ctx, r, c);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a.is_zero() {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        let b = other.get(ib, jb);
                        if !b.is_zero() {
                            out.set(ia * other.rows + ib, ja * other.cols + jb, a * b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[CycNumber]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns vs vector {}", self.cols, v.len())));
        }
        let mut out = vec![CycNumber::zero(&self.ctx); self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if !a.is_zero() {
                    *slot += &(a * x);
                }
            }
        }
        Ok(out)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycNumber::one(&self.ctx));
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        let mut inv = Self::zeros(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form restricted to pivots in the first `limit`
    /// columns. Pivots are chosen on the first nonzero entry scanning columns
    /// left to right, rows top to bottom.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rj = self.get(r, j);
                    if !rj.is_zero() {
                        let v = self.get(i, j) - &(&f * rj);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place(self.cols);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `rank_kernel`: rank and a kernel basis (one vector per free column).
    pub fn rank_kernel(&self) -> (usize, Vec<Vector>) {
        let (r, pivots) = self.rref();
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![CycNumber::zero(&self.ctx); self.cols];
            v[free] = CycNumber::one(&self.ctx);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            kernel.push(v);
        }
        (pivots.len(), kernel)
    }

    /// `solve_linear`: a solution of `M x = b` with free variables set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve_linear(&self, b: &[CycNumber]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("{} rows vs rhs {}", self.rows, b.len())));
        }
        let mut aug = Self::zeros(&self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place(self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![CycNumber::zero(&self.ctx); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Columns at the pivot positions of the RREF: a deterministic basis of the column space.
    pub fn column_space_basis(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn data(&self) -> &[CycNumber] {
        &self.data
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of `K^n`.
///
/// Quotient coordinates by this subspace are read off the non-pivot columns of
/// a fully reduced vector.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ctx: Ctx,
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl RowSpace {
    pub fn new(ctx: &Ctx, dim: usize) -> Self {
        RowSpace { ctx: ctx.clone(), dim, rows: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        p.sort_unstable();
        p
    }

    /// Reduce `v` against the current basis; the result has zeros at all pivots.
    pub fn reduce(&self, v: &[CycNumber]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNumber]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span; returns true if the rank grew.
    pub fn insert(&mut self, v: &[CycNumber]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    /// Non-pivot columns, ascending: canonical basis of the quotient `K^n / span`.
    pub fn free_columns(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.dim).filter(|c| piv.binary_search(c).is_err()).collect()
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// The reduced basis rows.
    pub fn basis(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, r)| r)
    }
}

pub fn zero_vector(ctx: &Ctx, n: usize) -> Vector {
    vec![CycNumber::zero(ctx); n]
}

pub fn unit_vector(ctx: &Ctx, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(ctx, n);
    v[i] = CycNumber::one(ctx);
    v
}

pub fn vec_is_zero(v: &[CycNumber]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[CycNumber], b: &[CycNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[CycNumber], b: &[CycNumber]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[CycNumber], s: &CycNumber) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// Kronecker product of vectors, index order `(i_a, i_b)`.
pub fn vec_kron(a: &[CycNumber], b: &[CycNumber]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Apply `M_0 ⊗ M_1 ⊗ … ⊗ M_k` to a vector without forming the Kronecker product.
pub fn kron_apply(mats: &[&FieldMatrix], v: &[CycNumber]) -> Result<Vector> {
    let expected: usize = mats.iter().map(|m| m.cols).product();
    if expected != v.len() {
        return Err(Error::DimensionMismatch(format!("tensor of width {expected} applied to length {}", v.len())));
    }
    let mut cur = v.to_vec();
    let mut dims: Vec<usize> = mats.iter().map(|m| m.cols).collect();
    for (j, m) in mats.iter().enumerate() {
        let left: usize = dims[..j].iter().product();
        let right: usize = dims[j + 1..].iter().product();
        let (din, dout) = (m.cols, m.rows);
        let ctx = &m.ctx;
        let mut next = vec![CycNumber::zero(ctx); left * dout * right];
        for l in 0..left {
            for k in 0..din {
                for r in 0..right {
                    let x = &cur[(l * din + k) * right + r];
                    if x.is_zero() {
                        continue;
                    }
                    for i in 0..dout {
                        let a = m.get(i, k);
                        if !a.is_zero() {
                            next[(l * dout + i) * right + r] += &(a * x);
                        }
                    }
                }
            }
        }
        dims[j] = dout;
        cur = next;
    }
    Ok(cur)
}

pub fn dot(a: &[CycNumber], b: &[CycNumber]) -> CycNumber {
    let ctx = a.first().or(b.first()).map(|x| x.ctx().clone());
    let mut acc = match ctx {
        Some(c) => CycNumber::zero(&c),
        None => panic!("dot of empty vectors needs a context"),
    };
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_context;

    #[test]
    fn trace_and_kron() {
        let q = make_context(1).unwrap();
        assert_eq!(FieldMatrix::identity(&q, 2).mat_trace().unwrap(), CycNumber::from_int(&q, 2));
        let k = FieldMatrix::identity(&q, 2).mat_kron(&FieldMatrix::identity(&q, 3)).unwrap();
        assert_eq!(k, FieldMatrix::identity(&q, 6));
        let a = FieldMatrix::from_int_rows(&q, &[&[2]]);
        let b = FieldMatrix::from_int_rows(&q, &[&[3]]);
        assert_eq!(a.mat_kron(&b).unwrap().mat_trace().unwrap(), CycNumber::from_int(&q, 6));
    }

    #[test]
    fn kron_index_order() {
        let q = make_context(1).unwrap();
        let a = FieldMatrix::from_int_rows(&q, &[&[1, 2]]);
        let b = FieldMatrix::from_int_rows(&q, &[&[1], &[10]]);
        let k = a.mat_kron(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k, FieldMatrix::from_int_rows(&q, &[&[1, 2], &[10, 20]]));
    }

    #[test]
    fn rank_kernel_examples() {
        let q = make_context(1).unwrap();
        let (r, k) = FieldMatrix::identity(&q, 2).rank_kernel();
        assert_eq!((r, k.len()), (2, 0));
        let m = FieldMatrix::from_int_rows(&q, &[&[1, 1], &[1, 1]]);
        let (r, k) = m.rank_kernel();
        assert_eq!((r, k.len()), (1, 1));
        assert!(vec_is_zero(&m.apply(&k[0]).unwrap()));
        let (r, k) = FieldMatrix::zeros(&q, 3, 3).rank_kernel();
        assert_eq!((r, k.len()), (0, 3));
    }

    #[test]
    fn solve_examples() {
        let q = make_context(1).unwrap();
        let one = CycNumber::one(&q);
        let zero = CycNumber::zero(&q);
        let two = CycNumber::from_int(&q, 2);
        let x = FieldMatrix::identity(&q, 2).solve_linear(&[one.clone(), zero.clone()]).unwrap();
        assert_eq!(x, Some(vec![one.clone(), zero.clone()]));
        let m = FieldMatrix::from_int_rows(&q, &[&[1, 1]]);
        assert_eq!(m.solve_linear(&[two.clone()]).unwrap(), Some(vec![two, zero.clone()]));
        let m = FieldMatrix::from_int_rows(&q, &[&[0]]);
        assert_eq!(m.solve_linear(&[one]).unwrap(), None);
    }

    #[test]
    fn dimension_errors() {
        let q = make_context(1).unwrap();
        let a = FieldMatrix::identity(&q, 2);
        let b = FieldMatrix::identity(&q, 3);
        assert!(matches!(a.mat_mul(&b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.mat_add(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rowspace_quotient() {
        let q = make_context(1).unwrap();
        let mut s = RowSpace::new(&q, 3);
        let v = |a: i64, b: i64, c: i64| vec![CycNumber::from_int(&q, a), CycNumber::from_int(&q, b), CycNumber::from_int(&q, c)];
        assert!(s.insert(&v(0, 1, 1)));
        assert!(!s.insert(&v(0, 2, 2)));
        assert!(s.insert(&v(1, 1, 0)));
        assert_eq!(s.free_columns(), vec![2]);
        assert!(s.contains(&v(1, 2, 1)));
    }

    #[test]
    fn kron_apply_matches_kron() {
        let ctx = make_context(1).unwrap();
        let a = FieldMatrix::from_int_rows(&ctx, &[&[1, 2], &[3, 4]]);
        let b = FieldMatrix::from_int_rows(&ctx, &[&[0, 1, 5], &[-1, 2, 0]]);
        let v: Vector = (1..=6).map(|x| CycNumber::from_int(&ctx, x)).collect();
        let direct = a.mat_kron(&b).unwrap().apply(&v).unwrap();
        assert_eq!(kron_apply(&[&a, &b], &v).unwrap(), direct);
    }
}
