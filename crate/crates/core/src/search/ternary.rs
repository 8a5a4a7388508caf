//! Ternary CCMs: matrices over {-1, 0, 1} with a diagonally regular Gramian.

use rayon::prelude::*;

use crate::algebra::TernaryMatrix;
use crate::error::{CcmError, Result};

/// Largest `N · K` searched without an override.
pub const TERNARY_GUARD_CELLS: usize = 16;

fn ternary_rows(k: usize) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|r| {
                [-1i8, 0, 1].into_iter().map(move |v| {
                    let mut r = r.clone();
                    r.push(v);
                    r
                })
            })
            .collect();
    }
    out
}

/// Rows placed outside-in; after each placement, the lags whose every pair
/// is now placed are checked.
struct TernaryPlan {
    n: usize,
    k: usize,
    order: Vec<usize>,
    checks: Vec<Vec<usize>>,
    rows: Vec<Vec<i8>>,
}

impl TernaryPlan {
    fn new(n: usize, k: usize) -> Self {
        let mut order = Vec::with_capacity(n);
        let (mut lo, mut hi) = (0usize, n - 1);
        let mut top = true;
        while lo <= hi {
            if top {
                order.push(lo);
                lo += 1;
            } else {
                order.push(hi);
                if hi == 0 {
                    break;
                }
                hi -= 1;
            }
            top = !top;
        }
        let mut placed = vec![false; n];
        let mut checked = vec![false; n];
        let mut checks = Vec::with_capacity(n);
        for &r in &order {
            placed[r] = true;
            let mut now = Vec::new();
            for lag in 1..n {
                if !checked[lag] && (0..n - lag).all(|i| placed[i] && placed[i + lag]) {
                    checked[lag] = true;
                    now.push(lag);
                }
            }
            checks.push(now);
        }
        TernaryPlan {
            n,
            k,
            order,
            checks,
            rows: ternary_rows(k),
        }
    }

    fn lag_zero(&self, m: &[i8], lag: usize) -> bool {
        let k = self.k;
        let mut s = 0i64;
        for i in 0..self.n - lag {
            for c in 0..k {
                s += (m[i * k + c] * m[(i + lag) * k + c]) as i64;
            }
        }
        s == 0
    }

    fn descend(&self, depth: usize, m: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        if depth == self.order.len() {
            out.push(m.clone());
            return;
        }
        let r = self.order[depth];
        let k = self.k;
        for row in &self.rows {
            m[r * k..(r + 1) * k].copy_from_slice(row);
            if self.checks[depth].iter().all(|&lag| self.lag_zero(m, lag)) {
                self.descend(depth + 1, m, out);
            }
        }
    }
}

/// Every `N x K` ternary CCM, sorted (`-1 < 0 < +1`, row-major).
pub fn search_ternary_ccm(n: usize, k: usize, guard_override: bool) -> Result<Vec<TernaryMatrix>> {
    if n == 0 || k == 0 {
        return Err(CcmError::DimensionMismatch("search needs N >= 1 and K >= 1".into()));
    }
    if n * k > TERNARY_GUARD_CELLS && !guard_override {
        return Err(CcmError::GuardExceeded(format!(
            "3^{} ternary matrices (limit 3^{TERNARY_GUARD_CELLS})",
            n * k
        )));
    }
    let plan = TernaryPlan::new(n, k);
    let first = plan.order[0];
    let mut found: Vec<Vec<i8>> = plan
        .rows
        .par_iter()
        .flat_map_iter(|row| {
            let mut m = vec![0i8; n * k];
            m[first * k..(first + 1) * k].copy_from_slice(row);
            let mut out = Vec::new();
            if plan.checks[0].iter().all(|&lag| plan.lag_zero(&m, lag)) {
                plan.descend(1, &mut m, &mut out);
            }
            out
        })
        .collect();
    found.sort_unstable();
    found
        .into_iter()
        .map(|e| TernaryMatrix::new(n, k, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ternary_is_ccm;

    #[test]
    fn single_row_matrices_all_qualify() {
        assert_eq!(search_ternary_ccm(1, 3, false).unwrap().len(), 27);
    }

    #[test]
    fn two_by_two_matches_full_enumeration() {
        let oracle = ternary_rows(4)
            .into_iter()
            .map(|e| TernaryMatrix::new(2, 2, e).unwrap())
            .filter(ternary_is_ccm)
            .count();
        assert_eq!(search_ternary_ccm(2, 2, false).unwrap().len(), oracle);
    }
}
