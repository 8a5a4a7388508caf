use std::fmt;

use super::word::{Generator, Word};
use crate::algebra::PhaseMatrix;
use crate::error::{CcmError, Result};

/// One element of the complementary group in normal form
/// `S^conj · P_σ · C_U · ρ_T · Q(β)`; the rightmost factor acts first.
///
/// Exponent conventions (0-indexed rows `n`, columns `k`):
/// * `Q(β)` adds `prog · (n + 1)` to row `n`;
/// * `ρ_T` replaces column `k` with its conjugate reversal when `rev_mask[k]`;
/// * `C_U` adds `col_mult[k]` to column `k`;
/// * `P_σ` makes new column `k` the old column `perm[k]`;
/// * `S` negates every exponent.
///
/// The group depends on the row count through `Q`, so elements carry `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryElement {
    pub(crate) p: u32,
    pub(crate) n_rows: usize,
    pub(crate) conj: bool,
    pub(crate) perm: Vec<usize>,
    pub(crate) col_mult: Vec<u8>,
    pub(crate) rev_mask: Vec<bool>,
    pub(crate) prog: u8,
}

pub(crate) fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&i| i < perm.len() && !std::mem::replace(&mut seen[i], true))
}

pub(crate) fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &s) in perm.iter().enumerate() {
        inv[s] = k;
    }
    inv
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

impl SymmetryElement {
    pub fn identity(p: u32, n_rows: usize, n_cols: usize) -> Self {
        SymmetryElement {
            p,
            n_rows,
            conj: false,
            perm: (0..n_cols).collect(),
            col_mult: vec![0; n_cols],
            rev_mask: vec![false; n_cols],
            prog: 0,
        }
    }

    pub fn new(
        p: u32,
        n_rows: usize,
        conj: bool,
        perm: Vec<usize>,
        col_mult: Vec<u8>,
        rev_mask: Vec<bool>,
        prog: u8,
    ) -> Result<Self> {
        let k = perm.len();
        if !is_permutation(&perm) {
            return Err(CcmError::InvalidPermutation(perm));
        }
        if col_mult.len() != k || rev_mask.len() != k {
            return Err(CcmError::DimensionMismatch(format!(
                "element parts have lengths {k}, {}, {}",
                col_mult.len(),
                rev_mask.len()
            )));
        }
        if let Some(&e) = col_mult.iter().chain(std::iter::once(&prog)).find(|&&e| e as u32 >= p) {
            return Err(CcmError::InvalidExponent { exp: e as u32, p });
        }
        Ok(SymmetryElement {
            p,
            n_rows,
            conj,
            perm,
            col_mult,
            rev_mask,
            prog,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.perm.len()
    }

    pub fn conj(&self) -> bool {
        self.conj
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn col_mult(&self) -> &[u8] {
        &self.col_mult
    }

    pub fn rev_mask(&self) -> &[bool] {
        &self.rev_mask
    }

    pub fn prog(&self) -> u8 {
        self.prog
    }

    pub fn is_identity(&self) -> bool {
        *self == SymmetryElement::identity(self.p, self.n_rows, self.n_cols())
    }

    fn check_matrix(&self, m: &PhaseMatrix) -> Result<()> {
        if m.p() != self.p {
            return Err(CcmError::ModulusMismatch(self.p, m.p()));
        }
        if m.shape() != (self.n_rows, self.n_cols()) {
            return Err(CcmError::DimensionMismatch(format!(
                "element acts on {}x{}, matrix is {}x{}",
                self.n_rows,
                self.n_cols(),
                m.n_rows(),
                m.n_cols()
            )));
        }
        Ok(())
    }

    fn check_peer(&self, other: &SymmetryElement) -> Result<()> {
        if self.p != other.p {
            return Err(CcmError::ModulusMismatch(self.p, other.p));
        }
        if self.n_rows != other.n_rows || self.n_cols() != other.n_cols() {
            return Err(CcmError::DimensionMismatch("elements act on different shapes".into()));
        }
        Ok(())
    }

    pub fn apply(&self, m: &PhaseMatrix) -> Result<PhaseMatrix> {
        self.check_matrix(m)?;
        let mut out = vec![0u8; m.exps().len()];
        self.apply_into(m.exps(), &mut out);
        Ok(PhaseMatrix::from_raw(self.p, self.n_rows, self.n_cols(), out))
    }

    /// Raw action on row-major exponents.
    pub(crate) fn apply_into(&self, src: &[u8], dst: &mut [u8]) {
        let p = self.p as usize;
        let n = self.n_rows;
        let k = self.n_cols();
        let b = self.prog as usize;
        for (c_out, &c) in self.perm.iter().enumerate() {
            let u = self.col_mult[c] as usize;
            for row in 0..n {
                let v = if self.rev_mask[c] {
                    // -(m[N-1-row] + b(N-row)) + u
                    let src_v = src[(n - 1 - row) * k + c] as usize + b * (n - row);
                    (p - src_v % p) % p + u
                } else {
                    src[row * k + c] as usize + b * (row + 1) + u
                };
                let v = v % p;
                dst[row * k + c_out] = if self.conj { ((p - v) % p) as u8 } else { v as u8 };
            }
        }
    }

    /// Factor word `[S, P, C, ρ, Q]`, identity factors omitted.
    pub fn to_word(&self) -> Word {
        let mut w = Vec::new();
        if self.conj {
            w.push(Generator::Conj);
        }
        if self.perm.iter().enumerate().any(|(i, &s)| i != s) {
            w.push(Generator::Perm(self.perm.clone()));
        }
        if self.col_mult.iter().any(|&u| u != 0) {
            w.push(Generator::Mult(self.col_mult.clone()));
        }
        if self.rev_mask.iter().any(|&t| t) {
            w.push(Generator::Rev(self.rev_mask.clone()));
        }
        if self.prog != 0 {
            w.push(Generator::Prog(self.prog));
        }
        Word::new(w)
    }

    /// Normal form of `self ∘ other` (`other` acts first).
    pub fn compose(&self, other: &SymmetryElement) -> Result<SymmetryElement> {
        self.check_peer(other)?;
        let mut w = self.to_word().into_factors();
        w.extend(other.to_word().into_factors());
        Ok(Word::new(w).normal_form(self.p, self.n_rows, self.n_cols()))
    }

    pub fn inverse(&self) -> SymmetryElement {
        let p = self.p;
        let mut w = Vec::new();
        if self.prog != 0 {
            w.push(Generator::Prog(((p - self.prog as u32) % p) as u8));
        }
        w.push(Generator::Rev(self.rev_mask.clone()));
        w.push(Generator::Mult(
            self.col_mult.iter().map(|&u| ((p - u as u32) % p) as u8).collect(),
        ));
        w.push(Generator::Perm(invert_permutation(&self.perm)));
        if self.conj {
            w.push(Generator::Conj);
        }
        Word::new(w).normal_form(p, self.n_rows, self.n_cols())
    }

    /// `2^{K+1} p^{K+1} K!`, the number of distinct normal forms.
    pub fn normal_form_count(p: u32, n_cols: usize) -> u128 {
        let fact: u128 = (1..=n_cols as u128).product();
        2u128.pow(n_cols as u32 + 1) * (p as u128).pow(n_cols as u32 + 1) * fact
    }

    /// Every normal form, in a fixed order (S, σ, U, T, β nested outer to inner).
    pub fn enumerate(p: u32, n_rows: usize, n_cols: usize) -> impl Iterator<Item = SymmetryElement> {
        let perms = permutations(n_cols);
        let mults = (0..(p as usize).pow(n_cols as u32)).map(move |mut code| {
            let mut u = vec![0u8; n_cols];
            for slot in u.iter_mut().rev() {
                *slot = (code % p as usize) as u8;
                code /= p as usize;
            }
            u
        });
        let mults: Vec<Vec<u8>> = mults.collect();
        let masks: Vec<Vec<bool>> = (0..1usize << n_cols)
            .map(|bits| (0..n_cols).map(|k| bits >> (n_cols - 1 - k) & 1 == 1).collect())
            .collect();
        [false, true].into_iter().flat_map(move |conj| {
            let perms = perms.clone();
            let mults = mults.clone();
            let masks = masks.clone();
            perms.into_iter().flat_map(move |perm| {
                let mults = mults.clone();
                let masks = masks.clone();
                mults.into_iter().flat_map(move |u| {
                    let perm = perm.clone();
                    let masks = masks.clone();
                    masks.into_iter().flat_map(move |t| {
                        let perm = perm.clone();
                        let u = u.clone();
                        (0..p as u8).map(move |b| SymmetryElement {
                            p,
                            n_rows,
                            conj,
                            perm: perm.clone(),
                            col_mult: u.clone(),
                            rev_mask: t.clone(),
                            prog: b,
                        })
                    })
                })
            })
        })
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|s| (s + 1).to_string()).collect();
        let sep = if self.n_cols() > 9 { "," } else { "" };
        let u: String = self
            .col_mult
            .iter()
            .map(|&e| std::char::from_digit(e as u32, 36).expect("exponent below 36"))
            .collect();
        let t: String = self.rev_mask.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(
            f,
            "S:{} P:{} U:{} T:{} Q:{}",
            self.conj as u8,
            perm.join(sep),
            u,
            t,
            std::char::from_digit(self.prog as u32, 36).expect("exponent below 36")
        )
    }
}

impl SymmetryElement {
    /// Parses the `S:… P:… U:… T:… Q:…` text form.
    pub fn parse(text: &str, p: u32, n_rows: usize) -> Result<Self> {
        let err = |msg: &str| CcmError::Parse {
            line: 0,
            msg: format!("{msg} in {text:?}"),
        };
        let mut parts = [None; 5];
        for tok in text.split_whitespace() {
            let (key, val) = tok.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let slot = ["S", "P", "U", "T", "Q"]
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| err("unknown field"))?;
            parts[slot] = Some(val);
        }
        let [Some(s), Some(pp), Some(u), Some(t), Some(q)] = parts else {
            return Err(err("missing field"));
        };
        let conj = match s {
            "0" => false,
            "1" => true,
            _ => return Err(err("bad S")),
        };
        let perm: Vec<usize> = if pp.contains(',') {
            pp.split(',').map(|x| x.parse::<usize>().ok()).collect::<Option<_>>()
        } else {
            pp.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()
        }
        .ok_or_else(|| err("bad P"))?;
        let perm = perm
            .into_iter()
            .map(|x| x.checked_sub(1))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| err("P is 1-based"))?;
        let digit = |c: char| c.to_digit(36).map(|d| d as u8);
        let col_mult = u.chars().map(digit).collect::<Option<Vec<u8>>>().ok_or_else(|| err("bad U"))?;
        let rev_mask = t
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<bool>>>()
            .ok_or_else(|| err("bad T"))?;
        let mut qc = q.chars();
        let prog = match (qc.next().and_then(digit), qc.next()) {
            (Some(d), None) => d,
            _ => return Err(err("bad Q")),
        };
        SymmetryElement::new(p, n_rows, conj, perm, col_mult, rev_mask, prog)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_lexicographic() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps[0], vec![0, 1, 2]);
        assert_eq!(ps[5], vec![2, 1, 0]);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn text_form_round_trip() {
        let g = SymmetryElement::new(4, 3, true, vec![2, 0, 1], vec![0, 3, 1], vec![true, false, true], 2)
            .unwrap();
        let s = g.to_string();
        assert_eq!(s, "S:1 P:312 U:031 T:101 Q:2");
        assert_eq!(SymmetryElement::parse(&s, 4, 3).unwrap(), g);
        assert!(SymmetryElement::parse("S:1 P:112 U:031 T:101 Q:2", 4, 3).is_err());
    }

    #[test]
    fn identity_fixes_matrices() {
        let m = PhaseMatrix::parse_quad("[[1, i, -1],[-i, 1, i]]").unwrap();
        let id = SymmetryElement::identity(4, 2, 3);
        assert_eq!(id.apply(&m).unwrap(), m);
        assert!(id.is_identity());
    }

    #[test]
    fn normal_form_count_matches_enumeration() {
        assert_eq!(SymmetryElement::normal_form_count(4, 4), 786_432);
        assert_eq!(SymmetryElement::enumerate(2, 2, 2).count() as u128, SymmetryElement::normal_form_count(2, 2));
        assert_eq!(SymmetryElement::enumerate(3, 2, 3).count() as u128, SymmetryElement::normal_form_count(3, 3));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let m = PhaseMatrix::ones(4, 2, 2).unwrap();
        assert!(SymmetryElement::identity(4, 3, 2).apply(&m).is_err());
        assert!(SymmetryElement::identity(2, 2, 2).apply(&m).is_err());
    }
}
