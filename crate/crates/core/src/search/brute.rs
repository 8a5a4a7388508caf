//! Unpruned enumeration, the ground truth for the pruned search.

use rayon::prelude::*;

use crate::algebra::{is_ccm, PhaseMatrix};
use crate::error::{CcmError, Result};

pub const BRUTE_GUARD: f64 = 1e8;

/// Every `N x K` p-phase CCM, sorted.
pub fn brute_force_ccm(p: u32, n: usize, k: usize, guard_override: bool) -> Result<Vec<PhaseMatrix>> {
    if p == 0 || p > crate::algebra::MAX_MODULUS {
        return Err(CcmError::InvalidModulus(p));
    }
    if n == 0 || k == 0 {
        return Err(CcmError::DimensionMismatch("enumeration needs N >= 1 and K >= 1".into()));
    }
    let total = (p as f64).powi((n * k) as i32);
    if total > BRUTE_GUARD && !guard_override {
        return Err(CcmError::GuardExceeded(format!("{p}^{} matrices (limit {BRUTE_GUARD:e})", n * k)));
    }
    let firsts = (p as u64).pow(k as u32);
    let mut out: Vec<PhaseMatrix> = (0..firsts)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut exps = vec![0u8; n * k];
            let mut f = first;
            for c in (0..k).rev() {
                exps[c] = (f % p as u64) as u8;
                f /= p as u64;
            }
            let mut found = Vec::new();
            loop {
                let m = PhaseMatrix::from_raw(p, n, k, exps.clone());
                if is_ccm(&m) {
                    found.push(m);
                }
                // odometer over rows 2..N
                let mut i = n * k;
                loop {
                    if i == k {
                        return found.into_iter();
                    }
                    i -= 1;
                    exps[i] += 1;
                    if (exps[i] as u32) < p {
                        break;
                    }
                    exps[i] = 0;
                }
            }
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}
