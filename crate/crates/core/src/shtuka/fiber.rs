//! Vectors in `V_1 ⊗ ... ⊗ V_n` stored row-major over the slot dimensions.

use crate::error::{Error, Result};
use crate::exactfield::{kron_apply, CycNumber, FieldMatrix, Vector};

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Insert the slots `vdims` carrying `v` at position `pos`.
pub fn insert(x: &[CycNumber], dims: &[usize], pos: usize, v: &[CycNumber], vdims: &[usize]) -> Result<Vector> {
    if x.len() != dims.iter().product::<usize>() || v.len() != vdims.iter().product::<usize>() || pos > dims.len() {
        return Err(Error::DimensionMismatch("slot insertion shape".into()));
    }
    let right: usize = dims[pos..].iter().product();
    let left = x.len() / right.max(1);
    let mid = v.len();
    let ctx = v[0].ctx();
    let mut out = vec![CycNumber::zero(ctx); x.len() * mid];
    for a in 0..left {
        for c in 0..right {
            let xv = &x[a * right + c];
            if xv.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if !vb.is_zero() {
                    out[(a * mid + b) * right + c] = xv * vb;
                }
            }
        }
    }
    Ok(out)
}

/// Apply `m` to slot `i`.
pub fn apply_slot(x: &[CycNumber], dims: &[usize], i: usize, m: &FieldMatrix) -> Result<Vector> {
    let ctx = m.ctx();
    let ids: Vec<FieldMatrix> = dims.iter().map(|&d| FieldMatrix::identity(ctx, d)).collect();
    let mats: Vec<&FieldMatrix> = (0..dims.len()).map(|j| if j == i { m } else { &ids[j] }).collect();
    kron_apply(&mats, x)
}

/// Reorder slots so that new slot `j` is old slot `order[j]`.
pub fn permute(x: &[CycNumber], dims: &[usize], order: &[usize]) -> Result<(Vector, Vec<usize>)> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
        return Err(Error::DimensionMismatch("slot order is not a permutation".into()));
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let old_strides = strides(dims);
    let mut out = x.to_vec();
    let mut idx = vec![0usize; n];
    for item in out.iter_mut() {
        let src: usize = (0..n).map(|j| idx[j] * old_strides[order[j]]).sum();
        *item = x[src].clone();
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < new_dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok((out, new_dims))
}

/// Move slot `from` to position `to`.
pub fn move_slot(x: &[CycNumber], dims: &[usize], from: usize, to: usize) -> Result<(Vector, Vec<usize>)> {
    let mut order: Vec<usize> = (0..dims.len()).filter(|&j| j != from).collect();
    if to > order.len() {
        return Err(Error::DimensionMismatch("slot position out of range".into()));
    }
    order.insert(to, from);
    permute(x, dims, &order)
}

/// Pair the first `k` slots with `covector`.
pub fn contract_front(x: &[CycNumber], dims: &[usize], k: usize, covector: &[CycNumber]) -> Result<Vector> {
    let front: usize = dims[..k].iter().product();
    if covector.len() != front || x.len() % front.max(1) != 0 {
        return Err(Error::DimensionMismatch("contraction shape".into()));
    }
    let rest = x.len() / front;
    let ctx = covector[0].ctx();
    let mut out = vec![CycNumber::zero(ctx); rest];
    for (b, cb) in covector.iter().enumerate() {
        if cb.is_zero() {
            continue;
        }
        for (c, o) in out.iter_mut().enumerate() {
            let xv = &x[b * rest + c];
            if !xv.is_zero() {
                *o += &(cb * xv);
            }
        }
    }
    Ok(out)
}

/// `Σ_i e_i ⊗ e_i` in `K^d ⊗ K^d`, used both as coevaluation and evaluation.
pub fn identity_tensor(ctx: &crate::exactfield::Ctx, d: usize) -> Vector {
    let mut v = vec![CycNumber::zero(ctx); d * d];
    for i in 0..d {
        v[i * d + i] = CycNumber::one(ctx);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{make_context, vec_kron};

    fn ints(ctx: &crate::exactfield::Ctx, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| CycNumber::from_int(ctx, x)).collect()
    }

    #[test]
    fn slot_operations_match_kronecker_products() {
        let ctx = make_context(1).unwrap();
        let (a, b, c) = (ints(&ctx, &[1, 2]), ints(&ctx, &[3, 4, 5]), ints(&ctx, &[6, 7]));
        let ac = vec_kron(&a, &c);
        let abc = vec_kron(&vec_kron(&a, &b), &c);
        assert_eq!(insert(&ac, &[2, 2], 1, &b, &[3]).unwrap(), abc);
        let (moved, dims) = move_slot(&abc, &[2, 3, 2], 0, 2).unwrap();
        assert_eq!(dims, vec![3, 2, 2]);
        assert_eq!(moved, vec_kron(&vec_kron(&b, &c), &a));
        let m = FieldMatrix::from_int_rows(&ctx, &[&[0, 1], &[1, 0]]);
        let swapped = apply_slot(&abc, &[2, 3, 2], 2, &m).unwrap();
        assert_eq!(swapped, vec_kron(&vec_kron(&a, &b), &ints(&ctx, &[7, 6])));
        // ⟨(1, 1), a⟩ = 3
        let contracted = contract_front(&abc, &[2, 3, 2], 1, &ints(&ctx, &[1, 1])).unwrap();
        assert_eq!(contracted, vec_kron(&b, &c).iter().map(|x| x * &CycNumber::from_int(&ctx, 3)).collect::<Vector>());
        let e = identity_tensor(&ctx, 2);
        assert_eq!(contract_front(&vec_kron(&e, &c), &[2, 2, 2], 2, &e).unwrap(), vec_kron(&ints(&ctx, &[2]), &c));
    }
}
