//! Traces of the Frobenius-twisted Hecke action on the character groupoid.
//!
//! The module category is modelled by bimodules `B_{V,f}` over the character-groupoid
//! algebra. Their `HH₀` is computed orbitwise on the fixed locus and compared with
//! invariant sections; the composite operators `S` and `T` and the partial Frobenius
//! maps are assembled from explicit stage maps, each checked to descend to `HH₀`.

mod checks;
mod dense;
mod fiber;
mod hecke;
mod hh;
mod operators;
mod report;
mod scenario;
mod selftest;
mod space;

pub use checks::{
    character_oracle, check_trace_space, chern_check, enumeration_check, excursion_action_check, hecke_check,
    span_check, t_algebra_check, tautological_loops, verify_frobenius_product, verify_s_equals_t,
    verify_s_equals_t_on, CHERN_GROUP_LIMIT,
};
pub use report::{run_check, CheckBuilder, CheckResult, Literal, NamedValue, Report, Status};
pub use dense::{commutation_iso, dense_t_operator, CommutationIso, DENSE_RAW_LIMIT};
pub use fiber::{apply_slot, contract_front, identity_tensor, insert, move_slot, permute};
pub use hecke::{fiber_matrix, normal_form_map, raw_normal_form, HeckeBasis, HeckeBimodule};
pub use operators::{
    excursion_block, excursion_composite, excursion_operator, global_monodromy, partial_frobenius,
    partial_frobenius_composite, s_datum, s_operator, t_composite, t_operator, Composite, OperatorMatrix, Provenance,
    SOperator, Stage,
};
pub use hh::{HHBlock, StructuredHH};
pub use scenario::{
    build_scenario, builtin_names, builtin_source, load_scenario, BuildOptions, ModuleModel, Scenario, ScenarioFile,
};
pub use selftest::{
    criterion_chern, criterion_cyclicity, criterion_enumeration, criterion_excursion_laws, criterion_legs,
    criterion_partial_frobenius, criterion_span, criterion_two_traces, criterion_vacuum, leg_choices, random_scenario,
    random_xi, run_selftest, CriterionResult, SelftestOptions, SelftestReport, CORE_SCENARIOS, LEGS_LIMIT_MS,
    SUITE_LIMIT_MS, VACUUM_LIMIT_MS,
};
pub use space::{
    fixed_point_of, legged_space, model_slots, trace_space, DenseHH, LeggedSpace, TraceSpace, DENSE_ALGEBRA_LIMIT,
    DENSE_BIMODULE_LIMIT,
};
