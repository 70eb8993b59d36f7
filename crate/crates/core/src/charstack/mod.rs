//! Character groupoids `Hom(Γ, G)/G`, their fixed loci under an endomorphism of
//! `Γ`, and equivariant bundles on them.

mod bundle;
mod groupoid;

pub use bundle::{
    bundle_from_rep, monodromy, monodromy_char, rational_context, sections, ActionGroupoid, EquivariantBundle,
    SectionSpace,
};
pub use groupoid::{
    build_char_groupoid, fixed_groupoid_pairs, fixed_groupoid_torus, fixed_groupoid_torus_with, loop_image,
    match_fixed_descriptions, CharGroupoid, FixedGroupoid, FixedMatch, FixedObject,
};
