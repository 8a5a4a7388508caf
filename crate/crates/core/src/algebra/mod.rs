//! Exact arithmetic over roots of unity, correlation functions and the
//! complementary-code-matrix test.

mod correlation;
mod cyclotomic;
mod matrix;

pub use correlation::{
    autocorrelation, composite_autocorrelation, has_orthogonal_rows, integer_product, is_ccm,
    row_correlation, row_gramian, row_product, ternary_gramian, ternary_is_ccm,
    CorrelationProfile,
};
pub use cyclotomic::{cyclotomic_polynomial, CycSum, CyclotomicRing, IntPoly};
pub use matrix::{ExactScalar, PhaseCode, PhaseMatrix, Square, TernaryMatrix, MAX_MODULUS};

/// `true` iff `s` is the complex number zero.
pub fn cyc_is_zero(s: &CycSum) -> bool {
    s.is_zero()
}

/// Taxicab size of a correlation value; see [`CycSum::taxicab_norm`].
pub fn taxicab_norm(s: &CycSum) -> i64 {
    s.taxicab_norm()
}

/// Diagonal regularity of a Gramian of exact scalars.
pub fn is_diagonally_regular<T: ExactScalar>(q: &Square<T>) -> bool {
    q.is_diagonally_regular()
}
