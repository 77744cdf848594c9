//! Gröbner bases of ideals and of submodules of free modules, and the
//! decision procedures built on them.

mod engine;
mod ideal;
mod module;
mod vector;

pub use engine::{audit_stats, set_audit, set_step_budget, step_budget, DEFAULT_BUDGET};
pub use ideal::{
    dimension, eliminate, groebner_basis, height_and_grade, ideal_equal, intersect, is_groebner_basis, normal_form,
    quotient, quotient_by, render_generators, saturate, Ideal,
};
pub use module::{submodule_membership, syzygies, FreeModuleElement, Submodule};
