//! Orbits, normalization and canonical representatives.
//!
//! Every normal form `S P C_U ρ_T Q(β)` can be rewritten as
//! `C_{U'} S P ρ_T Q(β)`, and a column multiplier is fixed uniquely by
//! requiring the first row to be all ones. The orbit members with a first row
//! of ones are therefore exactly the first-row normalizations of the
//! `2 · K! · 2^K · p` images under multiplier-free elements. Canonical forms
//! and class invariants work on that much smaller set.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::element::{permutations, SymmetryElement};
use super::word::{Generator, Word};
use crate::algebra::PhaseMatrix;
use crate::error::{CcmError, Result};

/// Largest group enumerated element by element.
pub const ORBIT_GUARD: u128 = 10_000_000;

static GUARD_OVERRIDE: AtomicBool = AtomicBool::new(false);

/// Lift [`ORBIT_GUARD`] for the rest of the process.
pub fn set_orbit_guard_override(on: bool) {
    GUARD_OVERRIDE.store(on, Ordering::Relaxed);
}

/// An equivalence class: every image of one matrix under the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    members: Vec<PhaseMatrix>,
}

impl Orbit {
    /// Sorted, duplicate-free members.
    pub fn members(&self) -> &[PhaseMatrix] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Lexicographically least member.
    pub fn canonical(&self) -> &PhaseMatrix {
        &self.members[0]
    }

    pub fn contains(&self, m: &PhaseMatrix) -> bool {
        self.members.binary_search(m).is_ok()
    }
}

fn full_guard(m: &PhaseMatrix) -> Result<()> {
    let count = SymmetryElement::normal_form_count(m.p(), m.n_cols());
    if count > ORBIT_GUARD && !GUARD_OVERRIDE.load(Ordering::Relaxed) {
        return Err(CcmError::GuardExceeded(format!(
            "{count} group elements for p={} K={} (limit {ORBIT_GUARD})",
            m.p(),
            m.n_cols()
        )));
    }
    Ok(())
}

fn reduced_guard(m: &PhaseMatrix) -> Result<()> {
    let count = SymmetryElement::normal_form_count(m.p(), m.n_cols()) / (m.p() as u128).pow(m.n_cols() as u32);
    if count > ORBIT_GUARD && !GUARD_OVERRIDE.load(Ordering::Relaxed) {
        return Err(CcmError::GuardExceeded(format!(
            "{count} multiplier-free elements for p={} K={} (limit {ORBIT_GUARD})",
            m.p(),
            m.n_cols()
        )));
    }
    Ok(())
}

/// Images under every normal form.
pub fn orbit_by_normal_forms(m: &PhaseMatrix) -> Result<Vec<PhaseMatrix>> {
    full_guard(m)?;
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    let perms = permutations(k);
    let jobs: Vec<(bool, &Vec<usize>)> = [false, true]
        .iter()
        .flat_map(|&c| perms.iter().map(move |s| (c, s)))
        .collect();
    let mut members: Vec<PhaseMatrix> = jobs
        .par_iter()
        .flat_map_iter(|&(conj, perm)| {
            let mut seen = HashSet::new();
            let mut buf = vec![0u8; n * k];
            let mut g = SymmetryElement::identity(p, n, k);
            g.conj = conj;
            g.perm = perm.clone();
            for ucode in 0..(p as usize).pow(k as u32) {
                let mut c = ucode;
                for slot in g.col_mult.iter_mut().rev() {
                    *slot = (c % p as usize) as u8;
                    c /= p as usize;
                }
                for tbits in 0..1usize << k {
                    for (i, t) in g.rev_mask.iter_mut().enumerate() {
                        *t = tbits >> i & 1 == 1;
                    }
                    for b in 0..p as u8 {
                        g.prog = b;
                        g.apply_into(m.exps(), &mut buf);
                        seen.insert(buf.clone());
                    }
                }
            }
            seen.into_iter().map(move |e| PhaseMatrix::from_raw(p, n, k, e))
        })
        .collect();
    members.par_sort_unstable();
    members.dedup();
    Ok(members)
}

/// One generator from each family (single-column versions where the family
/// has a column index), enough to generate the whole group.
pub fn generators(p: u32, n_cols: usize) -> Vec<Generator> {
    let mut gens = vec![Generator::Conj, Generator::Prog(1 % p as u8)];
    if n_cols >= 2 {
        let mut swap: Vec<usize> = (0..n_cols).collect();
        swap.swap(0, 1);
        gens.push(Generator::Perm(swap));
        let cycle: Vec<usize> = (0..n_cols).map(|i| (i + 1) % n_cols).collect();
        gens.push(Generator::Perm(cycle));
    }
    for c in 0..n_cols {
        let mut u = vec![0u8; n_cols];
        u[c] = 1 % p as u8;
        gens.push(Generator::Mult(u));
        let mut t = vec![false; n_cols];
        t[c] = true;
        gens.push(Generator::Rev(t));
    }
    gens
}

/// Breadth-first closure of `{m}` under the generators.
pub fn orbit_by_closure(m: &PhaseMatrix) -> Result<Vec<PhaseMatrix>> {
    full_guard(m)?;
    let gens = generators(m.p(), m.n_cols());
    let mut seen: HashSet<PhaseMatrix> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(m.clone());
    queue.push_back(m.clone());
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.apply(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut members: Vec<PhaseMatrix> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(members)
}

/// Full orbit, computed by normal-form enumeration and by generator closure;
/// the two must agree.
pub fn orbit(m: &PhaseMatrix) -> Result<Orbit> {
    let by_forms = orbit_by_normal_forms(m)?;
    let by_closure = orbit_by_closure(m)?;
    if by_forms != by_closure {
        return Err(CcmError::OrbitMismatch {
            normal_forms: by_forms.len(),
            closure: by_closure.len(),
        });
    }
    Ok(Orbit { members: by_closure })
}

/// Multiply each column by the conjugate of its first entry.
pub(crate) fn normalize_first_row(p: u32, n_cols: usize, exps: &mut [u8]) {
    let p = p as usize;
    for c in 0..n_cols {
        let shift = p - exps[c] as usize;
        if shift == p {
            continue;
        }
        for v in exps[c..].iter_mut().step_by(n_cols) {
            *v = ((*v as usize + shift) % p) as u8;
        }
    }
}

/// `C_U M` with `U` chosen so the first row is all ones.
pub fn first_row_normalized(m: &PhaseMatrix) -> PhaseMatrix {
    let mut exps = m.exps().to_vec();
    normalize_first_row(m.p(), m.n_cols(), &mut exps);
    PhaseMatrix::from_raw(m.p(), m.n_rows(), m.n_cols(), exps)
}

/// Calls `f` on the first-row normalization of `h M` for every
/// multiplier-free `h`, with repeats; stops early once `f` returns true.
pub(crate) fn scan_normalized(m: &PhaseMatrix, mut f: impl FnMut(&[u8]) -> bool) -> Result<bool> {
    reduced_guard(m)?;
    let (n, k) = (m.n_rows(), m.n_cols());
    let perms = permutations(k);
    let mut found = false;
    let mut img = vec![0u8; n * k];
    for_each_base(m, |base| {
        for perm in &perms {
            // permuting columns commutes with first-row normalization
            for r in 0..n {
                for (j, &c) in perm.iter().enumerate() {
                    img[r * k + j] = base[r * k + c];
                }
            }
            if f(&img) {
                found = true;
                return true;
            }
        }
        false
    });
    Ok(found)
}

/// First-row normalizations of `S^s ρ_T Q(β) M`.
fn for_each_base(m: &PhaseMatrix, mut f: impl FnMut(&[u8]) -> bool) {
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    let mut g = SymmetryElement::identity(p, n, k);
    let mut base = vec![0u8; n * k];
    for conj in [false, true] {
        g.conj = conj;
        for tbits in 0..1usize << k {
            for (i, t) in g.rev_mask.iter_mut().enumerate() {
                *t = tbits >> i & 1 == 1;
            }
            for b in 0..p as u8 {
                g.prog = b;
                g.apply_into(m.exps(), &mut base);
                normalize_first_row(p, k, &mut base);
                if f(&base) {
                    return;
                }
            }
        }
    }
}

/// Orbit members whose first row is all ones, sorted and duplicate-free.
pub fn normalized_orbit(m: &PhaseMatrix) -> Result<Vec<PhaseMatrix>> {
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    let mut out: HashSet<Vec<u8>> = HashSet::new();
    scan_normalized(m, |img| {
        if !out.contains(img) {
            out.insert(img.to_vec());
        }
        false
    })?;
    let mut members: Vec<PhaseMatrix> = out.into_iter().map(|e| PhaseMatrix::from_raw(p, n, k, e)).collect();
    members.sort_unstable();
    Ok(members)
}

/// Orbit size from the normalized orbit: each first row `U` is reached by
/// exactly `|normalized orbit|` members.
pub fn orbit_size(m: &PhaseMatrix) -> Result<u128> {
    Ok(normalized_orbit(m)?.len() as u128 * (m.p() as u128).pow(m.n_cols() as u32))
}

/// Lexicographically least orbit member.
///
/// The least member has a first row of ones, and among the column orders of
/// one normalized image the least is the one with columns sorted top-down.
pub fn canonical_form(m: &PhaseMatrix) -> Result<PhaseMatrix> {
    reduced_guard(m)?;
    let (n, k) = (m.n_rows(), m.n_cols());
    let mut best: Option<Vec<u8>> = None;
    let mut cols: Vec<Vec<u8>> = vec![Vec::with_capacity(n); k];
    let mut cand = vec![0u8; n * k];
    for_each_base(m, |base| {
        for (c, col) in cols.iter_mut().enumerate() {
            col.clear();
            col.extend((0..n).map(|r| base[r * k + c]));
        }
        cols.sort_unstable();
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                cand[r * k + c] = v;
            }
        }
        match &mut best {
            Some(b) if *b <= cand => {}
            Some(b) => b.copy_from_slice(&cand),
            None => best = Some(cand.clone()),
        }
        false
    });
    Ok(PhaseMatrix::from_raw(m.p(), n, k, best.expect("at least one image")))
}

/// Normalize following the constructive argument: scale each column by the
/// conjugate of its first entry, apply `Q(β)` with `β` the conjugate of the
/// new `m_{2,1}`, then rescale the columns. Returns the normalized matrix and
/// the element mapping `m` to it.
pub fn normalize(m: &PhaseMatrix) -> (PhaseMatrix, SymmetryElement) {
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    let neg = |e: u8| ((p - e as u32 % p) % p) as u8;
    let first: Vec<u8> = m.row(0).iter().map(|&e| neg(e)).collect();
    let b = if n >= 2 {
        // after the first scaling m_{2,1} becomes m21 - m11
        neg(((m.get(1, 0) as u32 + p - m.get(0, 0) as u32) % p) as u8)
    } else {
        0
    };
    let word = Word::new(vec![
        Generator::Mult(vec![neg(b); k]),
        Generator::Prog(b),
        Generator::Mult(first),
    ]);
    let g = word.normal_form(p, n, k);
    let out = g.apply(m).expect("element built for this shape");
    debug_assert!(out.is_normalized());
    (out, g)
}
