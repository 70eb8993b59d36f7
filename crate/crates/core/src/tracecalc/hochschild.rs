use std::sync::Arc;

use super::algebra::FinDimAlgebra;
use super::bimodule::{bimodule_tensor, raw_commutator, same_algebra, Bimodule, Quotient, TensorProduct};
use crate::error::{Error, Result};
use crate::exactfield::{unit_vector, vec_add, vec_is_zero, CycNumber, FieldMatrix, RowSpace, Vector};

/// `HH₀(A, Q) = Q / span{aq − qa}`.
#[derive(Clone, Debug)]
pub struct HHSpace {
    pub quotient: Quotient,
}

impl HHSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn project(&self, q: &[CycNumber]) -> Vector {
        self.quotient.project(q)
    }

    pub fn lift(&self, c: &[CycNumber]) -> Vector {
        self.quotient.lift(c)
    }

    pub fn projection_matrix(&self) -> FieldMatrix {
        self.quotient.projection_matrix()
    }

    pub fn section_matrix(&self) -> FieldMatrix {
        self.quotient.section_matrix()
    }
}

pub fn hh0(q: &Bimodule) -> Result<HHSpace> {
    if !same_algebra(q.left_algebra(), q.right_algebra()) {
        return Err(Error::AlgebraAxiom("HH₀ needs an (A, A)-bimodule".into()));
    }
    let ctx = q.left_algebra().ctx().clone();
    let n = q.dim();
    let mut rel = RowSpace::new(&ctx, n);
    for i in 0..q.left_algebra().dim() {
        let l = q.left_basis(i);
        let r = q.right_basis(i);
        for j in 0..n {
            let v: Vector = (0..n).map(|k| l.get(k, j) - r.get(k, j)).collect();
            if !vec_is_zero(&v) {
                rel.insert(&v);
            }
            if rel.is_full() {
                break;
            }
        }
    }
    Ok(HHSpace { quotient: Quotient::new(rel) })
}

/// The flip `[q ⊗ p] ↦ [p ⊗ q]` between `HH₀(A, Q ⊗_B P)` and `HH₀(B, P ⊗_A Q)`.
#[derive(Clone, Debug)]
pub struct CyclicityIso {
    pub qp: TensorProduct,
    pub pq: TensorProduct,
    pub hh_qp: HHSpace,
    pub hh_pq: HHSpace,
    pub forward: FieldMatrix,
    pub backward: FieldMatrix,
}

fn flip(raw: &[CycNumber], n1: usize, n2: usize) -> Vector {
    let mut out = raw.to_vec();
    for i in 0..n1 {
        for j in 0..n2 {
            out[j * n1 + i] = raw[i * n2 + j].clone();
        }
    }
    out
}

/// Matrix of the flip from `HH₀` of `first ⊗ second` to `HH₀` of `second ⊗ first`,
/// after checking that every generator of the kernel maps to zero.
fn flip_matrix(
    first: &Bimodule,
    second: &Bimodule,
    src: &TensorProduct,
    src_hh: &HHSpace,
    dst: &TensorProduct,
    dst_hh: &HHSpace,
) -> Result<FieldMatrix> {
    let ctx = first.left_algebra().ctx().clone();
    let (n1, n2) = (src.q_dim, src.p_dim);
    let to_dst = |raw: &[CycNumber]| dst_hh.project(&dst.quotient.project(&flip(raw, n1, n2)));
    for r in src.quotient.relations().basis() {
        if !vec_is_zero(&to_dst(r)) {
            return Err(Error::CheckFailed("flip does not kill a tensor relation".into()));
        }
    }
    let d = src.bimodule.dim();
    for a in 0..first.left_algebra().dim() {
        for x in 0..d {
            let c = raw_commutator(src, first, second, a, &unit_vector(&ctx, d, x));
            if !vec_is_zero(&to_dst(&c)) {
                return Err(Error::CheckFailed("flip does not kill a commutator".into()));
            }
        }
    }
    let k = src_hh.dim();
    let cols: Vec<Vector> = (0..k)
        .map(|i| to_dst(&src.quotient.lift(&src_hh.lift(&unit_vector(&ctx, k, i)))))
        .collect();
    Ok(FieldMatrix::from_columns(&ctx, dst_hh.dim(), &cols))
}

pub fn cyclicity_iso(q: &Bimodule, p: &Bimodule) -> Result<CyclicityIso> {
    if !same_algebra(q.left_algebra(), p.right_algebra()) || !same_algebra(q.right_algebra(), p.left_algebra()) {
        return Err(Error::AlgebraAxiom("cyclicity needs (A, B) and (B, A) bimodules".into()));
    }
    let qp = bimodule_tensor(q, p)?;
    let pq = bimodule_tensor(p, q)?;
    let hh_qp = hh0(&qp.bimodule)?;
    let hh_pq = hh0(&pq.bimodule)?;
    let forward = flip_matrix(q, p, &qp, &hh_qp, &pq, &hh_pq)?;
    let backward = flip_matrix(p, q, &pq, &hh_pq, &qp, &hh_qp)?;
    if !forward.mat_mul(&backward)?.is_identity() || !backward.mat_mul(&forward)?.is_identity() {
        return Err(Error::CheckFailed("flip maps are not mutually inverse".into()));
    }
    Ok(CyclicityIso { qp, pq, hh_qp, hh_pq, forward, backward })
}

/// An `n × n` idempotent `E` over `A` and a compatible `B = EBE` over a bimodule `Q`,
/// both stored row-major.
#[derive(Clone, Debug)]
pub struct ProjectiveModuleData {
    pub n: usize,
    pub e: Vec<Vector>,
    pub b: Vec<Vector>,
}

fn alg_mat_mul(a: &FinDimAlgebra, x: &[Vector], y: &[Vector], n: usize) -> Vec<Vector> {
    let ctx = a.ctx();
    let mut out = vec![vec![CycNumber::zero(ctx); a.dim()]; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = a.mul(&x[i * n + k], &y[k * n + j]);
                out[i * n + j] = vec_add(&out[i * n + j], &p);
            }
        }
    }
    out
}

/// `X · B` with `X` over `A` acting on the left of `Q`.
fn left_mat(q: &Bimodule, x: &[Vector], b: &[Vector], n: usize) -> Result<Vec<Vector>> {
    let ctx = q.left_algebra().ctx();
    let mut out = vec![vec![CycNumber::zero(ctx); q.dim()]; n * n];
    for i in 0..n {
        for k in 0..n {
            if vec_is_zero(&x[i * n + k]) {
                continue;
            }
            let m = q.left_action(&x[i * n + k]);
            for j in 0..n {
                out[i * n + j] = vec_add(&out[i * n + j], &m.apply(&b[k * n + j])?);
            }
        }
    }
    Ok(out)
}

/// `B · Y` with `Y` over `A` acting on the right of `Q`.
fn right_mat(q: &Bimodule, b: &[Vector], y: &[Vector], n: usize) -> Result<Vec<Vector>> {
    let ctx = q.left_algebra().ctx();
    let mut out = vec![vec![CycNumber::zero(ctx); q.dim()]; n * n];
    for k in 0..n {
        for j in 0..n {
            if vec_is_zero(&y[k * n + j]) {
                continue;
            }
            let m = q.right_action(&y[k * n + j]);
            for i in 0..n {
                out[i * n + j] = vec_add(&out[i * n + j], &m.apply(&b[i * n + k])?);
            }
        }
    }
    Ok(out)
}

impl ProjectiveModuleData {
    pub fn check(&self, q: &Bimodule) -> Result<()> {
        let a = q.left_algebra();
        let n = self.n;
        if self.e.len() != n * n || self.b.len() != n * n {
            return Err(Error::ProjectiveData("matrix sizes differ from n".into()));
        }
        if alg_mat_mul(a, &self.e, &self.e, n) != self.e {
            return Err(Error::ProjectiveData("E is not idempotent".into()));
        }
        let ebe = right_mat(q, &left_mat(q, &self.e, &self.b, n)?, &self.e, n)?;
        if ebe != self.b {
            return Err(Error::ProjectiveData("B ≠ EBE".into()));
        }
        Ok(())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self, a_dim: usize, q_dim: usize, ctx: &crate::exactfield::Ctx) -> Self {
        let n = self.n + other.n;
        let za = vec![CycNumber::zero(ctx); a_dim];
        let zq = vec![CycNumber::zero(ctx); q_dim];
        let mut e = vec![za; n * n];
        let mut b = vec![zq; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                e[i * n + j] = self.e[i * self.n + j].clone();
                b[i * n + j] = self.b[i * self.n + j].clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                e[(self.n + i) * n + self.n + j] = other.e[i * other.n + j].clone();
                b[(self.n + i) * n + self.n + j] = other.b[i * other.n + j].clone();
            }
        }
        ProjectiveModuleData { n, e, b }
    }

    /// `(U E U⁻¹, U B U⁻¹)` for an invertible `U` over `A` with inverse `u_inv`.
    pub fn conjugate(&self, q: &Bimodule, u: &[Vector], u_inv: &[Vector]) -> Result<Self> {
        let a = q.left_algebra();
        let n = self.n;
        let e = alg_mat_mul(a, &alg_mat_mul(a, u, &self.e, n), u_inv, n);
        let b = right_mat(q, &left_mat(q, u, &self.b, n)?, u_inv, n)?;
        Ok(ProjectiveModuleData { n, e, b })
    }
}

/// Class of `(E, B)` in `HH₀(A, Q)`: the projection of `Σ_i B_ii`.
pub fn hattori_stallings(pm: &ProjectiveModuleData, q: &Bimodule, hh: &HHSpace) -> Result<Vector> {
    pm.check(q)?;
    let ctx = q.left_algebra().ctx();
    let mut t = vec![CycNumber::zero(ctx); q.dim()];
    for i in 0..pm.n {
        t = vec_add(&t, &pm.b[i * pm.n + i]);
    }
    Ok(hh.project(&t))
}

/// Trace of `T ∈ End(K^n)` computed as coevaluation, flip, evaluation through the
/// cyclicity isomorphism for `K^n ⊗ (K^n)^∨`.
pub fn trace_of_bimodule_endo(t: &FieldMatrix) -> Result<CycNumber> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
    }
    let ctx = t.ctx().clone();
    let n = t.rows();
    let k = Arc::new(FinDimAlgebra::diagonal(&ctx, 1));
    let v = Bimodule::vector_space(&k, n)?;
    let vd = Bimodule::vector_space(&k, n)?;
    let iso = cyclicity_iso(&v, &vd)?;
    // Σ T_ij e_i ⊗ e_j^∨
    let mut raw = vec![CycNumber::zero(&ctx); n * n];
    for i in 0..n {
        for j in 0..n {
            raw[i * n + j] = t.get(i, j).clone();
        }
    }
    let class = iso.hh_qp.project(&iso.qp.quotient.project(&raw));
    let image = iso.forward.apply(&class)?;
    let back = iso.pq.quotient.lift(&iso.hh_pq.lift(&image));
    // evaluation e_j^∨ ⊗ e_i ↦ δ_ij
    let mut acc = CycNumber::zero(&ctx);
    for i in 0..n {
        acc += &back[i * n + i];
    }
    Ok(acc)
}
