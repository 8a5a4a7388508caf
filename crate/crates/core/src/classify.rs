//! Equivalence classes of CCMs and per-class construction flags.
//!
//! Every flag is a class invariant. Hadamard and Kronecker structure survive
//! column multipliers, so it is enough to scan the orbit members whose first
//! row is all ones. The real/imaginary split does not survive multiplying a
//! column by `i`, so the dual-pair scan adds those multipliers back. Column
//! splits are carried along by every group element, so concatenation is
//! decided on a single representative.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{has_orthogonal_rows, is_ccm, ternary_is_ccm, PhaseMatrix, TernaryMatrix};
use crate::archive::{parse_archive, Record};
use crate::construct::{commutator, concatenate_all, dual_pair_split, kronecker, kronecker_raw};
use crate::error::{CcmError, Result};
use crate::search::{search_ccm, SearchConfig};
use crate::symmetry::{canonical_form, normalized_orbit, scan_normalized};

/// Witness for a dual-pair class: `member = A + iB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPairWitness {
    pub member: PhaseMatrix,
    pub real: TernaryMatrix,
    pub imag: TernaryMatrix,
}

/// `member` equals `left ⊗ right` or `[left, right]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorWitness {
    pub member: PhaseMatrix,
    pub left: PhaseMatrix,
    pub right: PhaseMatrix,
}

/// Which factor shapes count as a Kronecker decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KroneckerConvention {
    /// Both factors have at least two rows.
    ProperFactors,
    /// Any factor except `1 x 1`.
    Inclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub canonical: PhaseMatrix,
    pub orbit_size: u128,
    /// How many input matrices fell into this class.
    pub found: usize,
    pub hadamard: Option<PhaseMatrix>,
    pub dual_pair: Option<DualPairWitness>,
    pub kronecker: Option<FactorWitness>,
    pub kronecker_inclusive: Option<FactorWitness>,
    pub concatenation: Option<FactorWitness>,
}

impl ClassRecord {
    fn bare(canonical: PhaseMatrix, orbit_size: u128, found: usize) -> Self {
        ClassRecord {
            canonical,
            orbit_size,
            found,
            hadamard: None,
            dual_pair: None,
            kronecker: None,
            kronecker_inclusive: None,
            concatenation: None,
        }
    }
}

/// Group matrices of one shape by canonical form; records come back sorted
/// by canonical form, flags unset.
pub fn partition_classes(matrices: &[PhaseMatrix]) -> Result<Vec<ClassRecord>> {
    let Some(first) = matrices.first() else {
        return Ok(Vec::new());
    };
    let shape = (first.p(), first.n_rows(), first.n_cols());
    if let Some(m) = matrices.iter().find(|m| (m.p(), m.n_rows(), m.n_cols()) != shape) {
        return Err(CcmError::DimensionMismatch(format!(
            "mixed shapes {}x{} (p={}) and {}x{} (p={})",
            shape.1,
            shape.2,
            shape.0,
            m.n_rows(),
            m.n_cols(),
            m.p()
        )));
    }
    let canon = matrices.par_iter().map(canonical_form).collect::<Result<Vec<_>>>()?;
    let mut counts: BTreeMap<PhaseMatrix, usize> = BTreeMap::new();
    for c in canon {
        *counts.entry(c).or_default() += 1;
    }
    counts
        .into_par_iter()
        .map(|(c, found)| {
            let size = normalized_orbit(&c)?.len() as u128 * (c.p() as u128).pow(c.n_cols() as u32);
            Ok(ClassRecord::bare(c, size, found))
        })
        .collect()
}

/// A member with mutually orthogonal rows, `H H* = K I`.
pub fn class_has_hadamard(rec: &ClassRecord) -> Result<Option<PhaseMatrix>> {
    let m = &rec.canonical;
    let mut witness = None;
    scan_normalized(m, |img| {
        let x = PhaseMatrix::from_raw(m.p(), m.n_rows(), m.n_cols(), img.to_vec());
        if has_orthogonal_rows(&x) {
            witness = Some(x);
            return true;
        }
        false
    })?;
    Ok(witness)
}

fn ternary_lags(v: impl Fn(usize) -> i64, n: usize, out: &mut [i64]) {
    for (lag, o) in out.iter_mut().enumerate().skip(1) {
        *o = (0..n - lag).map(|i| v(i) * v(i + lag)).sum();
    }
}

/// A member whose real and imaginary parts are both ternary CCMs.
pub fn class_has_dual_pair(rec: &ClassRecord) -> Result<Option<DualPairWitness>> {
    let m = &rec.canonical;
    if m.p() != 4 {
        return Err(CcmError::RequiresQuadPhase {
            op: "class_has_dual_pair",
            p: m.p(),
        });
    }
    let (n, k) = m.shape();
    const RE: [i64; 4] = [1, 0, -1, 0];
    const IM: [i64; 4] = [0, 1, 0, -1];
    let mut base = vec![0i64; n];
    let mut delta = vec![vec![0i64; n]; k];
    let mut re = vec![0i64; n];
    let mut im = vec![0i64; n];
    let mut hit = None;
    scan_normalized(m, |img| {
        // real-part lag sums with no column turned, and the change from
        // multiplying column c by i (which swaps its parts up to sign)
        base.iter_mut().for_each(|b| *b = 0);
        for c in 0..k {
            ternary_lags(|i| RE[img[i * k + c] as usize], n, &mut re);
            ternary_lags(|i| IM[img[i * k + c] as usize], n, &mut im);
            for lag in 1..n {
                base[lag] += re[lag];
                delta[c][lag] = im[lag] - re[lag];
            }
        }
        for turn in 0usize..1 << k {
            let ok = (1..n).all(|lag| {
                base[lag] + (0..k).filter(|c| turn >> c & 1 == 1).map(|c| delta[c][lag]).sum::<i64>() == 0
            });
            if ok {
                let exps = (0..n * k)
                    .map(|i| ((img[i] as usize + (turn >> (i % k) & 1)) % 4) as u8)
                    .collect();
                hit = Some(PhaseMatrix::from_raw(4, n, k, exps));
                return true;
            }
        }
        false
    })?;
    let Some(member) = hit else {
        return Ok(None);
    };
    let (real, imag) = dual_pair_split(&member)?;
    if !(ternary_is_ccm(&real) && ternary_is_ccm(&imag)) {
        return Err(CcmError::TheoremViolation("dual-pair scan produced non-CCM parts".into()));
    }
    // a CCM with CCM parts forces the commutator condition
    if !commutator(&real, &imag)?.is_diagonally_regular() {
        return Err(CcmError::TheoremViolation(format!(
            "commutator of the parts of {member} is not diagonally regular"
        )));
    }
    Ok(Some(DualPairWitness { member, real, imag }))
}

/// Canonical forms of every CCM class for the shapes needed as factors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorPool {
    shapes: BTreeMap<(u32, usize, usize), BTreeSet<PhaseMatrix>>,
}

impl FactorPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the complete class list for one shape.
    pub fn insert_shape(&mut self, p: u32, n: usize, k: usize, classes: impl IntoIterator<Item = PhaseMatrix>) -> Result<()> {
        let mut set = BTreeSet::new();
        for m in classes {
            if (m.p(), m.n_rows(), m.n_cols()) != (p, n, k) {
                return Err(CcmError::DimensionMismatch(format!("pool entry {m} is not {n}x{k} over p={p}")));
            }
            set.insert(canonical_form(&m)?);
        }
        self.shapes.insert((p, n, k), set);
        Ok(())
    }

    pub fn has_shape(&self, p: u32, n: usize, k: usize) -> bool {
        self.shapes.contains_key(&(p, n, k))
    }

    pub fn classes(&self, p: u32, n: usize, k: usize) -> Option<&BTreeSet<PhaseMatrix>> {
        self.shapes.get(&(p, n, k))
    }

    /// Whether `m` is a CCM of a registered class.
    pub fn contains(&self, m: &PhaseMatrix) -> Result<bool> {
        let set = self.shapes.get(&(m.p(), m.n_rows(), m.n_cols())).ok_or(CcmError::MissingPool {
            n: m.n_rows(),
            k: m.n_cols(),
        })?;
        Ok(is_ccm(m) && set.contains(&canonical_form(m)?))
    }

    /// Factor shapes `((N1,K1),(N2,K2))` with `N1 N2 = N`, `K1 K2 = K`.
    pub fn kronecker_shapes(n: usize, k: usize, conv: KroneckerConvention) -> Vec<((usize, usize), (usize, usize))> {
        let divisors = |x: usize| (1..=x).filter(move |d| x.is_multiple_of(*d));
        let mut out = Vec::new();
        for n1 in divisors(n) {
            for k1 in divisors(k) {
                let (n2, k2) = (n / n1, k / k1);
                if (n1, k1) == (1, 1) || (n2, k2) == (1, 1) {
                    continue;
                }
                if conv == KroneckerConvention::ProperFactors && (n1 == 1 || n2 == 1) {
                    continue;
                }
                out.push(((n1, k1), (n2, k2)));
            }
        }
        out
    }

    /// Shapes a census of `N x K` consults.
    pub fn required_shapes(n: usize, k: usize) -> BTreeSet<(usize, usize)> {
        let mut s: BTreeSet<(usize, usize)> = (1..k).map(|k1| (n, k1)).collect();
        for (a, b) in Self::kronecker_shapes(n, k, KroneckerConvention::Inclusive) {
            s.insert(a);
            s.insert(b);
        }
        s
    }

    /// Runs the search for every shape the `N x K` census needs.
    pub fn for_target(p: u32, n: usize, k: usize, jobs: usize) -> Result<Self> {
        let mut pool = FactorPool::new();
        for (n1, k1) in Self::required_shapes(n, k) {
            let mut cfg = SearchConfig::new(p, n1, k1);
            cfg.emit_raw = false;
            cfg.jobs = jobs;
            pool.insert_shape(p, n1, k1, search_ccm(&cfg)?)?;
        }
        Ok(pool)
    }
}

/// A column bipartition of the representative into two pool members.
pub fn class_has_concatenation(rec: &ClassRecord, pool: &FactorPool) -> Result<Option<FactorWitness>> {
    let m = &rec.canonical;
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    for k1 in 1..k {
        if !pool.has_shape(p, n, k1) {
            return Err(CcmError::MissingPool { n, k: k1 });
        }
    }
    // column 0 always goes left, so each split is tried once
    for mask in 0usize..1 << (k - 1) {
        let left: Vec<usize> = std::iter::once(0).chain((1..k).filter(|c| mask >> (c - 1) & 1 == 1)).collect();
        if left.len() == k {
            continue;
        }
        let right: Vec<usize> = (1..k).filter(|c| !left.contains(c)).collect();
        let a = m.select_columns(&left)?;
        let b = m.select_columns(&right)?;
        if is_ccm(&a) && is_ccm(&b) && pool.contains(&a)? && pool.contains(&b)? {
            let member = concatenate_all(&[a.clone(), b.clone()])?;
            return Ok(Some(FactorWitness { member, left: a, right: b }));
        }
    }
    Ok(None)
}

/// A member equal to a Kronecker product of pool members.
pub fn class_has_kronecker(rec: &ClassRecord, pool: &FactorPool, conv: KroneckerConvention) -> Result<Option<FactorWitness>> {
    let m = &rec.canonical;
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    let shapes = FactorPool::kronecker_shapes(n, k, conv);
    for &((n1, k1), (n2, k2)) in &shapes {
        for (a, b) in [(n1, k1), (n2, k2)] {
            if !pool.has_shape(p, a, b) {
                return Err(CcmError::MissingPool { n: a, k: b });
            }
        }
    }
    let mut err = None;
    let mut hit = None;
    scan_normalized(m, |img| {
        for &((n1, k1), (n2, k2)) in &shapes {
            // with a first row of ones both factors can be taken with a
            // first row of ones, and then they sit inside the product
            let at = |r1: usize, r2: usize, c1: usize, c2: usize| img[(r1 * n2 + r2) * k + c1 * k2 + c2];
            let is_product = (0..n1).all(|r1| {
                (0..n2).all(|r2| {
                    (0..k1).all(|c1| {
                        (0..k2).all(|c2| {
                            at(r1, r2, c1, c2) as u32 == (at(r1, 0, c1, 0) as u32 + at(0, r2, 0, c2) as u32) % p
                        })
                    })
                })
            });
            if !is_product {
                continue;
            }
            let left: Vec<u8> = (0..n1).flat_map(|r| (0..k1).map(move |c| at(r, 0, c, 0))).collect();
            let right: Vec<u8> = (0..n2).flat_map(|r| (0..k2).map(move |c| at(0, r, 0, c))).collect();
            let a = PhaseMatrix::from_raw(p, n1, k1, left);
            let b = PhaseMatrix::from_raw(p, n2, k2, right);
            if !is_ccm(&a) || !is_ccm(&b) {
                continue;
            }
            let prod = kronecker_raw(&a, &b);
            debug_assert_eq!(prod.exps(), img);
            match (pool.contains(&a), pool.contains(&b)) {
                (Ok(true), Ok(true)) => {
                    hit = Some(FactorWitness { member: prod, left: a, right: b });
                    return true;
                }
                (Err(e), _) | (_, Err(e)) => {
                    err = Some(e);
                    return true;
                }
                _ => {}
            }
        }
        false
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(hit),
    }
}

/// Column values, in order: `hadamard`, `dual_pair`, `kronecker`,
/// `kronecker_inclusive`, `concatenation`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub p: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    pub inputs: usize,
    pub classes: usize,
    pub hadamard: usize,
    pub dual_pair: Option<usize>,
    pub kronecker: usize,
    pub kronecker_inclusive: usize,
    pub concatenation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub p: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    pub inputs: usize,
    pub classes: Vec<ClassRecord>,
}

fn flags(mut rec: ClassRecord, pool: &FactorPool) -> Result<ClassRecord> {
    rec.hadamard = class_has_hadamard(&rec)?;
    if rec.canonical.p() == 4 {
        rec.dual_pair = class_has_dual_pair(&rec)?;
    }
    rec.kronecker = class_has_kronecker(&rec, pool, KroneckerConvention::ProperFactors)?;
    rec.kronecker_inclusive = match &rec.kronecker {
        Some(w) => Some(w.clone()),
        None => class_has_kronecker(&rec, pool, KroneckerConvention::Inclusive)?,
    };
    rec.concatenation = class_has_concatenation(&rec, pool)?;
    Ok(rec)
}

/// Partition and flag every class.
pub fn census(matrices: &[PhaseMatrix], pool: &FactorPool) -> Result<Census> {
    let first = matrices
        .first()
        .ok_or_else(|| CcmError::DimensionMismatch("census of an empty list".into()))?;
    let (p, n_rows, n_cols) = (first.p(), first.n_rows(), first.n_cols());
    let classes = partition_classes(matrices)?
        .into_par_iter()
        .map(|rec| flags(rec, pool))
        .collect::<Result<Vec<_>>>()?;
    Ok(Census {
        p,
        n_rows,
        n_cols,
        inputs: matrices.len(),
        classes,
    })
}

impl Census {
    pub fn summary(&self) -> CensusSummary {
        let count = |f: fn(&ClassRecord) -> bool| self.classes.iter().filter(|r| f(r)).count();
        CensusSummary {
            p: self.p,
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            inputs: self.inputs,
            classes: self.classes.len(),
            hadamard: count(|r| r.hadamard.is_some()),
            dual_pair: (self.p == 4).then(|| count(|r| r.dual_pair.is_some())),
            kronecker: count(|r| r.kronecker.is_some()),
            kronecker_inclusive: count(|r| r.kronecker_inclusive.is_some()),
            concatenation: count(|r| r.concatenation.is_some()),
        }
    }

    /// `canonical,orbit_size,hadamard,dual_pair,kronecker,concatenation`.
    pub fn to_csv(&self) -> String {
        let bit = |b: bool| if b { "1" } else { "0" };
        let mut s = String::from("canonical,orbit_size,hadamard,dual_pair,kronecker,concatenation\n");
        for r in &self.classes {
            let dual = if self.p == 4 { bit(r.dual_pair.is_some()) } else { "-" };
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.canonical,
                r.orbit_size,
                bit(r.hadamard.is_some()),
                dual,
                bit(r.kronecker.is_some()),
                bit(r.concatenation.is_some())
            )
            .expect("writing to a String");
        }
        s
    }

    /// Canonical forms and every witness, grouped under `# class <i> <kind>`
    /// headers.
    pub fn witness_archive(&self) -> String {
        let mut s = format!("# census p={} {}x{}\n", self.p, self.n_rows, self.n_cols);
        let mut put = |i: usize, kind: &str, recs: &[String]| {
            writeln!(s, "# class {i} {kind}").expect("writing to a String");
            for r in recs {
                s.push_str(r);
                s.push('\n');
            }
        };
        for (i, r) in self.classes.iter().enumerate() {
            let i = i + 1;
            put(i, "canonical", &[r.canonical.to_string()]);
            if let Some(h) = &r.hadamard {
                put(i, "hadamard", &[h.to_string()]);
            }
            if let Some(d) = &r.dual_pair {
                put(i, "dual_pair", &[d.member.to_string(), d.real.to_string(), d.imag.to_string()]);
            }
            for (kind, w) in [
                ("kronecker", &r.kronecker),
                ("kronecker_inclusive", &r.kronecker_inclusive),
                ("concatenation", &r.concatenation),
            ] {
                if let Some(w) = w {
                    put(i, kind, &[w.member.to_string(), w.left.to_string(), w.right.to_string()]);
                }
            }
        }
        s
    }
}

fn phase(r: &Record) -> Result<&PhaseMatrix> {
    r.as_phase().ok_or_else(|| CcmError::Parse {
        line: 0,
        msg: "expected a phase record".into(),
    })
}

fn ternary(r: &Record) -> Result<&TernaryMatrix> {
    match r {
        Record::Ternary(t) => Ok(t),
        Record::Phase(_) => Err(CcmError::Parse {
            line: 0,
            msg: "expected a ternary record".into(),
        }),
    }
}

fn violation(class: usize, kind: &str, what: &str) -> CcmError {
    CcmError::TheoremViolation(format!("class {class} {kind}: {what}"))
}

/// Re-checks a witness archive without recomputing orbits beyond one
/// canonical form per witness. Returns the number of witnesses checked.
pub fn check_witness_archive(text: &str) -> Result<usize> {
    let mut groups: Vec<(usize, String, String)> = Vec::new();
    let mut body = String::new();
    let mut current: Option<(usize, String)> = None;
    let flush = |cur: &mut Option<(usize, String)>, body: &mut String, groups: &mut Vec<(usize, String, String)>| {
        if let Some((i, kind)) = cur.take() {
            groups.push((i, kind, std::mem::take(body)));
        }
    };
    for line in text.lines() {
        let mut words = line.split_whitespace();
        if let (Some("#"), Some("class"), Some(i), Some(kind)) = (words.next(), words.next(), words.next(), words.next()) {
            flush(&mut current, &mut body, &mut groups);
            let i = i.parse().map_err(|_| CcmError::Parse {
                line: 0,
                msg: format!("bad class index {i:?}"),
            })?;
            current = Some((i, kind.to_string()));
        } else if current.is_some() {
            body.push_str(line);
            body.push('\n');
        }
    }
    flush(&mut current, &mut body, &mut groups);

    let mut canon: HashMap<usize, PhaseMatrix> = HashMap::new();
    let mut checked = 0;
    for (i, kind, body) in groups {
        let recs = parse_archive(&body)?;
        let in_class = |m: &PhaseMatrix, canon: &HashMap<usize, PhaseMatrix>| -> Result<()> {
            match canon.get(&i) {
                Some(c) if canonical_form(m)? == *c => Ok(()),
                Some(_) => Err(violation(i, &kind, "witness is outside the class")),
                None => Err(violation(i, &kind, "witness before the class canonical form")),
            }
        };
        match (kind.as_str(), recs.as_slice()) {
            ("canonical", [r]) => {
                let m = phase(r)?;
                if canonical_form(m)? != *m || !is_ccm(m) {
                    return Err(violation(i, &kind, "not a canonical CCM"));
                }
                canon.insert(i, m.clone());
            }
            ("hadamard", [r]) => {
                let m = phase(r)?;
                in_class(m, &canon)?;
                if !has_orthogonal_rows(m) {
                    return Err(violation(i, &kind, "rows are not orthogonal"));
                }
            }
            ("dual_pair", [z, a, b]) => {
                let (z, a, b) = (phase(z)?, ternary(a)?, ternary(b)?);
                in_class(z, &canon)?;
                if dual_pair_split(z)? != (a.clone(), b.clone()) || !ternary_is_ccm(a) || !ternary_is_ccm(b) {
                    return Err(violation(i, &kind, "parts do not match or are not ternary CCMs"));
                }
                if !commutator(a, b)?.is_diagonally_regular() {
                    return Err(violation(i, &kind, "commutator is not diagonally regular"));
                }
            }
            ("kronecker" | "kronecker_inclusive" | "concatenation", [m, l, r]) => {
                let (m, l, r) = (phase(m)?, phase(l)?, phase(r)?);
                in_class(m, &canon)?;
                let built = if kind == "concatenation" {
                    concatenate_all(&[l.clone(), r.clone()])?
                } else {
                    kronecker(l, r)?
                };
                if built != *m || !is_ccm(l) || !is_ccm(r) {
                    return Err(violation(i, &kind, "factors do not rebuild the member"));
                }
            }
            _ => return Err(violation(i, &kind, "unexpected witness layout")),
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(t: &str) -> PhaseMatrix {
        PhaseMatrix::parse_quad(t).unwrap()
    }

    #[test]
    fn kronecker_shapes_by_convention() {
        let proper = FactorPool::kronecker_shapes(4, 4, KroneckerConvention::ProperFactors);
        assert!(proper.contains(&((2, 2), (2, 2))));
        assert!(proper.iter().all(|((a, _), (b, _))| *a > 1 && *b > 1));
        assert!(FactorPool::kronecker_shapes(2, 4, KroneckerConvention::ProperFactors).is_empty());
        assert!(FactorPool::kronecker_shapes(2, 4, KroneckerConvention::Inclusive).contains(&((1, 2), (2, 2))));
    }

    #[test]
    fn two_by_four_census() {
        let found = search_ccm(&SearchConfig::new(4, 2, 4)).unwrap();
        let pool = FactorPool::for_target(4, 2, 4, 0).unwrap();
        let c = census(&found, &pool).unwrap();
        let s = c.summary();
        assert_eq!((s.classes, s.hadamard, s.dual_pair, s.concatenation, s.kronecker), (2, 2, Some(2), 2, 0));
        assert_eq!(check_witness_archive(&c.witness_archive()).unwrap(), c.witness_archive().matches("# class").count());
    }

    #[test]
    fn missing_pool_is_reported() {
        let rec = partition_classes(&[quad("[[1,1,1,1],[1,1,-1,-1]]")]).unwrap().remove(0);
        assert!(matches!(
            class_has_concatenation(&rec, &FactorPool::new()),
            Err(CcmError::MissingPool { .. })
        ));
    }

    #[test]
    fn mixed_shapes_are_rejected() {
        let r = partition_classes(&[quad("[[1,1],[1,-1]]"), quad("[[1,1,1]]")]);
        assert!(matches!(r, Err(CcmError::DimensionMismatch(_))));
    }
}
