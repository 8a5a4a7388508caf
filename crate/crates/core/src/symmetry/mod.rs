//! The equivalence group acting on phase matrices.
//!
//! Generators: conjugation `S`, column permutation `P_σ`, column multipliers
//! `C_U`, column reversal `ρ_T` and the row progression `Q(β)`. Every element
//! has a unique normal form `S^s P_σ C_U ρ_T Q(β)`.

mod element;
mod orbit;
mod word;

pub use element::{permutations, SymmetryElement};
pub use orbit::{
    canonical_form, first_row_normalized, generators, normalize, normalized_orbit, orbit, orbit_by_closure,
    orbit_by_normal_forms, orbit_size, set_orbit_guard_override, Orbit, ORBIT_GUARD,
};
pub(crate) use orbit::scan_normalized;
pub use word::{
    conj_mult, permuted_mask, permuted_mult, prog_reversal_mult, rev_twisted_mult, Generator,
    Relation, RelationParams, Word,
};
