//! Exact arithmetic over cyclotomic fields and dense linear algebra on top of it.

mod cyclotomic;
mod literal;
mod matrix;

pub use cyclotomic::{cyclotomic_polynomial, lcm, make_context, Ctx, CycContext, CycNumber};
pub use literal::{parse_cyc, required_conductor};
pub use matrix::{
    dot, kron_apply, unit_vector, vec_add, vec_is_zero, vec_kron, vec_scale, vec_sub, zero_vector, FieldMatrix, RowSpace,
    Vector,
};
