//! Row enumerations: zero-sum tuples and increasing-exponent candidates.

use std::collections::HashMap;

use crate::algebra::CyclotomicRing;

/// Every row of `k` exponents mod `p`, in lexicographic order.
pub fn all_rows(p: u32, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity((p as usize).saturating_pow(k as u32));
    let mut row = vec![0u8; k];
    loop {
        out.push(row.clone());
        let mut c = k;
        loop {
            if c == 0 {
                return out;
            }
            c -= 1;
            row[c] += 1;
            if (row[c] as u32) < p {
                break;
            }
            row[c] = 0;
        }
    }
}

/// Exponent histogram of a row, as `CycSum` coefficients.
pub(crate) fn row_hist(p: u32, row: &[u8]) -> Vec<i64> {
    let mut h = vec![0i64; p as usize];
    for &e in row {
        h[e as usize] += 1;
    }
    h
}

/// Rows whose entries sum to zero, in lexicographic order.
pub fn zero_sum_tuples(p: u32, k: usize) -> Vec<Vec<u8>> {
    let ring = CyclotomicRing::get(p);
    all_rows(p, k)
        .into_iter()
        .filter(|r| ring.is_zero(&row_hist(p, r)))
        .collect()
}

/// Rows grouped by their (reduced) entry sum.
pub(crate) fn rows_by_sum(p: u32, k: usize) -> HashMap<Vec<i64>, Vec<Vec<u8>>> {
    let ring = CyclotomicRing::get(p);
    let mut map: HashMap<Vec<i64>, Vec<Vec<u8>>> = HashMap::new();
    for r in all_rows(p, k) {
        map.entry(ring.reduce(&row_hist(p, &r))).or_default().push(r);
    }
    map
}

/// Candidate rows that are sorted inside each run of equal entries of a base
/// row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCandidateSet {
    pub base_row: Vec<u8>,
    pub candidates: Vec<Vec<u8>>,
}

/// `run_start[c]` marks column `c` as the first of a run; inside a run the
/// candidate exponents must not decrease.
pub(crate) fn sorted_within_runs(p: u32, run_start: &[bool]) -> Vec<Vec<u8>> {
    fn go(p: u8, run_start: &[bool], row: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let c = row.len();
        if c == run_start.len() {
            out.push(row.clone());
            return;
        }
        let lo = if run_start[c] { 0 } else { row[c - 1] };
        for v in lo..p {
            row.push(v);
            go(p, run_start, row, out);
            row.pop();
        }
    }
    let mut out = Vec::new();
    go(p as u8, run_start, &mut Vec::with_capacity(run_start.len()), &mut out);
    out
}

/// Runs of a base row: a column starts a run unless it equals its left
/// neighbour.
pub(crate) fn runs_of(base: &[u8]) -> Vec<bool> {
    (0..base.len()).map(|c| c == 0 || base[c] != base[c - 1]).collect()
}

/// `E(base)`, in lexicographic order.
pub fn increasing_exponent_rows(p: u32, base: &[u8]) -> RowCandidateSet {
    RowCandidateSet {
        base_row: base.to_vec(),
        candidates: sorted_within_runs(p, &runs_of(base)),
    }
}
