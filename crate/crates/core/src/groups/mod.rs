//! Permutation groups, finitely presented groups and homomorphism enumeration.

mod fingroup;
mod homs;
mod perm;
mod presentation;

pub use fingroup::{group_from_permutations, ConjugacyClass, FinGroup, DEFAULT_MAX_GROUP_ORDER};
pub use homs::{
    action_orbits, conjugation_orbits, enumerate_homs, enumerate_homs_with, validate_phi, validate_phi_on,
    EnumerateOptions, GroupHom, Orbit, Orbits, PhiCheck, DEFAULT_MAX_SEARCH_NODES,
};
pub use perm::Permutation;
pub use presentation::{evaluate_word, mapping_torus, Endomorphism, Presentation, Word};
