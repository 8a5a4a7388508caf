//! Exhaustive enumeration of CCMs: the pruned outside-in search, the ternary
//! variant and a brute-force oracle.

mod brute;
mod ccm;
mod ternary;
mod tuples;

pub use brute::{brute_force_ccm, BRUTE_GUARD};
pub use ccm::{
    run_search, search_ccm, Progress, SearchConfig, SearchHooks, SearchOutcome, SearchStats,
    PROGRESS_INTERVAL, SEARCH_GUARD_BITS,
};
pub use ternary::{search_ternary_ccm, TERNARY_GUARD_CELLS};
pub use tuples::{all_rows, increasing_exponent_rows, zero_sum_tuples, RowCandidateSet};
