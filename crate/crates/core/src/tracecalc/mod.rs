//! Finite-dimensional algebras and bimodules, zeroth Hochschild homology, the
//! cyclicity isomorphism and Hattori–Stallings classes.

mod algebra;
mod bimodule;
mod hochschild;
mod random;

pub use algebra::{group_algebra, groupoid_algebra, FinDimAlgebra};
pub use bimodule::{bimodule_tensor, twist_bimodule, Bimodule, Quotient, TensorProduct};
pub use hochschild::{
    cyclicity_iso, hattori_stallings, hh0, trace_of_bimodule_endo, CyclicityIso, HHSpace, ProjectiveModuleData,
};
pub use random::{random_bimodule, SmallAlgebra};
