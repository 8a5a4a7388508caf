//! Complementary code matrices over roots of unity: exact correlation
//! arithmetic, the symmetry group, exhaustive search, classification and the
//! standard constructions.

pub mod algebra;
pub mod archive;
pub mod classify;
pub mod cli;
pub mod construct;
pub mod error;
pub mod search;
pub mod symmetry;

pub use algebra::{is_ccm, CycSum, PhaseCode, PhaseMatrix, TernaryMatrix};
pub use error::{CcmError, Result};
pub use symmetry::SymmetryElement;
