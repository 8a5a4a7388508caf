//! Codes and matrices over the p-th roots of unity, and ternary matrices.
//!
//! Entries are stored as exponents: the entry `ω^e` is the byte `e`, so every
//! stored matrix is unimodular by construction.

use std::fmt;

use crate::error::{CcmError, Result};

/// Largest supported modulus; archive rows use base-36 digits.
pub const MAX_MODULUS: u32 = 36;

fn check_modulus(p: u32) -> Result<()> {
    if (1..=MAX_MODULUS).contains(&p) {
        Ok(())
    } else {
        Err(CcmError::InvalidModulus(p))
    }
}

fn check_exps(p: u32, exps: &[u8]) -> Result<()> {
    match exps.iter().find(|&&e| e as u32 >= p) {
        Some(&e) => Err(CcmError::InvalidExponent { exp: e as u32, p }),
        None => Ok(()),
    }
}

/// A single code `(ω^{e_1}, …, ω^{e_N})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseCode {
    p: u32,
    exps: Vec<u8>,
}

impl PhaseCode {
    pub fn new(p: u32, exps: Vec<u8>) -> Result<Self> {
        check_modulus(p)?;
        if exps.is_empty() {
            return Err(CcmError::DimensionMismatch("a code needs at least one entry".into()));
        }
        check_exps(p, &exps)?;
        Ok(PhaseCode { p, exps })
    }

    /// A ±1 code from a sign vector.
    pub fn binary(signs: &[i8]) -> Result<Self> {
        let exps = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                other => Err(CcmError::InvalidTernary(other as i64)),
            })
            .collect::<Result<Vec<u8>>>()?;
        PhaseCode::new(2, exps)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }
}

/// An `N × K` matrix of p-th roots of unity, row-major exponent storage.
///
/// The derived ordering compares dimensions first and then the row-major
/// exponent digits, which is the canonical order used for orbit minima and
/// archive output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseMatrix {
    p: u32,
    n_rows: usize,
    n_cols: usize,
    exps: Vec<u8>,
}

impl PhaseMatrix {
    pub fn new(p: u32, n_rows: usize, n_cols: usize, exps: Vec<u8>) -> Result<Self> {
        check_modulus(p)?;
        if n_rows == 0 || n_cols == 0 {
            return Err(CcmError::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {n_rows}x{n_cols}"
            )));
        }
        if exps.len() != n_rows * n_cols {
            return Err(CcmError::DimensionMismatch(format!(
                "{} exponents for a {n_rows}x{n_cols} matrix",
                exps.len()
            )));
        }
        check_exps(p, &exps)?;
        Ok(PhaseMatrix {
            p,
            n_rows,
            n_cols,
            exps,
        })
    }

    /// Unchecked constructor for hot loops that already reduce mod p.
    pub(crate) fn from_raw(p: u32, n_rows: usize, n_cols: usize, exps: Vec<u8>) -> Self {
        debug_assert_eq!(exps.len(), n_rows * n_cols);
        debug_assert!(exps.iter().all(|&e| (e as u32) < p));
        PhaseMatrix {
            p,
            n_rows,
            n_cols,
            exps,
        }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u8>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(CcmError::DimensionMismatch("ragged rows".into()));
        }
        PhaseMatrix::new(p, rows.len(), n_cols, rows.concat())
    }

    pub fn from_columns(p: u32, cols: &[PhaseCode]) -> Result<Self> {
        let n = cols.first().map_or(0, PhaseCode::len);
        if cols.iter().any(|c| c.len() != n || c.p() != p) {
            return Err(CcmError::DimensionMismatch("columns differ in length or modulus".into()));
        }
        let k = cols.len();
        let mut exps = vec![0u8; n * k];
        for (c, col) in cols.iter().enumerate() {
            for (r, &e) in col.exps().iter().enumerate() {
                exps[r * k + c] = e;
            }
        }
        PhaseMatrix::new(p, n, k, exps)
    }

    /// All-ones matrix (every exponent zero).
    pub fn ones(p: u32, n_rows: usize, n_cols: usize) -> Result<Self> {
        PhaseMatrix::new(p, n_rows, n_cols, vec![0; n_rows * n_cols])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn into_exps(self) -> Vec<u8> {
        self.exps
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.exps[row * self.n_cols + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.exps[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.exps.chunks(self.n_cols)
    }

    pub fn column(&self, col: usize) -> PhaseCode {
        PhaseCode {
            p: self.p,
            exps: (0..self.n_rows).map(|r| self.get(r, col)).collect(),
        }
    }

    pub fn columns(&self) -> Vec<PhaseCode> {
        (0..self.n_cols).map(|c| self.column(c)).collect()
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.is_empty() || cols.iter().any(|&c| c >= self.n_cols) {
            return Err(CcmError::DimensionMismatch(format!("bad column selection {cols:?}")));
        }
        let mut exps = Vec::with_capacity(self.n_rows * cols.len());
        for r in 0..self.n_rows {
            exps.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Ok(PhaseMatrix::from_raw(self.p, self.n_rows, cols.len(), exps))
    }

    /// True when the first row is all ones and, for `N >= 2`, `m_{2,1} = 1`.
    pub fn is_normalized(&self) -> bool {
        self.row(0).iter().all(|&e| e == 0) && (self.n_rows < 2 || self.get(1, 0) == 0)
    }

    /// Re-express the entries over the `p'`-th roots, `p | p'`.
    pub fn embed(&self, p_new: u32) -> Result<Self> {
        check_modulus(p_new)?;
        if !p_new.is_multiple_of(self.p) {
            return Err(CcmError::ModulusMismatch(self.p, p_new));
        }
        let scale = (p_new / self.p) as u8;
        let exps = self.exps.iter().map(|&e| e * scale).collect();
        Ok(PhaseMatrix::from_raw(p_new, self.n_rows, self.n_cols, exps))
    }

    /// Parses quad-phase notation such as `[[1, i], [-1, -i]]`.
    pub fn parse_quad(text: &str) -> Result<Self> {
        let body = text.trim();
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| CcmError::Parse {
                line: 0,
                msg: "expected [[...], ...]".into(),
            })?;
        let mut rows = Vec::new();
        for chunk in body.split(']') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            let Some(inner) = chunk.strip_prefix('[') else {
                if chunk.is_empty() {
                    continue;
                }
                return Err(CcmError::Parse {
                    line: 0,
                    msg: format!("unexpected text {chunk:?}"),
                });
            };
            let row = inner
                .split(',')
                .map(|tok| match tok.trim() {
                    "1" | "+1" => Ok(0u8),
                    "i" | "+i" => Ok(1),
                    "-1" => Ok(2),
                    "-i" => Ok(3),
                    other => Err(CcmError::Parse {
                        line: 0,
                        msg: format!("not a fourth root of unity: {other:?}"),
                    }),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        PhaseMatrix::from_rows(4, &rows)
    }

    /// Inverse of [`PhaseMatrix::parse_quad`].
    pub fn to_quad_string(&self) -> Option<String> {
        if self.p != 4 {
            return None;
        }
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                let items: Vec<&str> = r.iter().map(|&e| ["1", "i", "-1", "-i"][e as usize]).collect();
                format!("[{}]", items.join(", "))
            })
            .collect();
        Some(format!("[{}]", rows.join(",")))
    }
}

/// A matrix over `{-1, 0, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<i8>,
}

impl TernaryMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<i8>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 || entries.len() != n_rows * n_cols {
            return Err(CcmError::DimensionMismatch(format!(
                "{} entries for a {n_rows}x{n_cols} ternary matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|e| !(-1..=1).contains(*e)) {
            return Err(CcmError::InvalidTernary(bad as i64));
        }
        Ok(TernaryMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(CcmError::DimensionMismatch("ragged rows".into()));
        }
        TernaryMatrix::new(rows.len(), k, rows.concat())
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self> {
        TernaryMatrix::new(n_rows, n_cols, vec![0; n_rows * n_cols])
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n_cols + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks(self.n_cols)
    }
}

/// Square matrix, row-major; used for Gramians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square<T> {
    n: usize,
    data: Vec<T>,
}

/// Exact scalar with addition and a zero test.
pub trait ExactScalar: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn is_exact_zero(&self) -> bool;
}

impl ExactScalar for i64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0
    }
}

impl ExactScalar for super::CycSum {
    fn plus(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl<T> Square<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CcmError::DimensionMismatch("matrix is not square".into()));
        }
        Ok(Square {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T: ExactScalar> Square<T> {
    /// Sum of the `d`-th diagonal: `d > 0` above the main diagonal, `d < 0`
    /// below. `None` when the diagonal is empty.
    pub fn diagonal_sum(&self, d: isize) -> Option<T> {
        let n = self.n as isize;
        if d.abs() >= n {
            return None;
        }
        let (i0, j0) = if d >= 0 { (0, d) } else { (-d, 0) };
        let len = n - d.abs();
        let mut acc = self.get(i0 as usize, j0 as usize).clone();
        for t in 1..len {
            acc = acc.plus(self.get((i0 + t) as usize, (j0 + t) as usize));
        }
        Some(acc)
    }

    /// Every diagonal other than the main one sums to zero.
    pub fn is_diagonally_regular(&self) -> bool {
        let n = self.n as isize;
        (1..n).all(|d| {
            self.diagonal_sum(d).is_some_and(|s| s.is_exact_zero())
                && self.diagonal_sum(-d).is_some_and(|s| s.is_exact_zero())
        })
    }
}

impl fmt::Display for Square<super::CycSum> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(PhaseMatrix::new(4, 2, 2, vec![0, 1, 2, 4]).is_err());
        assert!(PhaseMatrix::new(4, 2, 2, vec![0, 1, 2]).is_err());
        assert!(PhaseMatrix::new(0, 1, 1, vec![0]).is_err());
        assert!(TernaryMatrix::new(1, 2, vec![1, 2]).is_err());
        let m = PhaseMatrix::new(4, 2, 3, vec![0, 1, 2, 3, 0, 1]).unwrap();
        assert_eq!(m.row(1), &[3, 0, 1]);
        assert_eq!(m.column(1).exps(), &[1, 0]);
        assert_eq!(PhaseMatrix::from_columns(4, &m.columns()).unwrap(), m);
    }

    #[test]
    fn quad_notation_round_trip() {
        let m = PhaseMatrix::parse_quad("[[1, 1, 1, 1],[1, i, -1, -i]]").unwrap();
        assert_eq!(m.exps(), &[0, 0, 0, 0, 0, 1, 2, 3]);
        assert_eq!(PhaseMatrix::parse_quad(&m.to_quad_string().unwrap()).unwrap(), m);
        assert!(PhaseMatrix::parse_quad("[[1, 2]]").is_err());
    }

    #[test]
    fn integer_diagonal_regularity() {
        let q = Square::from_rows(vec![vec![4i64, 1], vec![1, 4]]).unwrap();
        assert!(!q.is_diagonally_regular());
        let q = Square::from_rows(vec![vec![4i64, -2, 0], vec![-2, 4, 2], vec![0, 2, 4]]).unwrap();
        assert!(q.is_diagonally_regular());
        assert_eq!(q.diagonal_sum(2), Some(0));
        assert_eq!(q.diagonal_sum(3), None);
    }
}
