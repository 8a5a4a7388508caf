//! Exact arithmetic over the p-th roots of unity.
//!
//! A sum of roots `Σ c_k ω^k` is kept as its integer coefficient vector. Two
//! coefficient vectors describe the same complex number exactly when their
//! difference is divisible by the p-th cyclotomic polynomial, so every
//! equality and zero test goes through the remainder modulo `Φ_p`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

/// Dense integer polynomial, coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Long division by a monic divisor; exact over the integers.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let d = divisor.degree().expect("division by zero polynomial");
        assert_eq!(divisor.0[d], 1, "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= d {
            return (IntPoly(Vec::new()), IntPoly::new(rem));
        }
        let mut quot = vec![0i64; rem.len() - d];
        for top in (d..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            quot[top - d] = c;
            for (i, dc) in divisor.0.iter().enumerate() {
                rem[top - d + i] -= c * dc;
            }
        }
        rem.truncate(d);
        (IntPoly::new(quot), IntPoly::new(rem))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// The p-th cyclotomic polynomial, by dividing `x^p - 1` by `Φ_d` for every
/// proper divisor `d` of `p`.
pub fn cyclotomic_polynomial(p: u32) -> IntPoly {
    assert!(p >= 1, "cyclotomic polynomial needs p >= 1");
    let p = p as usize;
    let mut num = vec![0i64; p + 1];
    num[0] = -1;
    num[p] = 1;
    let mut poly = IntPoly::new(num);
    for d in 1..p {
        if p.is_multiple_of(d) {
            let (q, r) = poly.div_rem_monic(&cyclotomic_polynomial(d as u32));
            debug_assert!(r.is_zero(), "Φ_{d} does not divide x^{p} - 1");
            poly = q;
        }
    }
    poly
}

/// Reduction data for `Z[ω]`, `ω = exp(2πi/p)`.
///
/// `basis[k]` is the remainder of `x^k` modulo `Φ_p`, so reducing a
/// coefficient vector is a single linear map.
#[derive(Debug)]
pub struct CyclotomicRing {
    p: u32,
    modulus: IntPoly,
    basis: Vec<Vec<i64>>,
    max_root_norm: i64,
}

impl CyclotomicRing {
    fn build(p: u32) -> Self {
        let modulus = cyclotomic_polynomial(p);
        let deg = modulus.degree().unwrap_or(0);
        let mut basis = Vec::with_capacity(p as usize);
        for k in 0..p as usize {
            let mut mono = vec![0i64; k + 1];
            mono[k] = 1;
            let (_, r) = IntPoly::new(mono).div_rem_monic(&modulus);
            let mut row = r.coeffs().to_vec();
            row.resize(deg, 0);
            basis.push(row);
        }
        let max_root_norm = basis
            .iter()
            .map(|row| row.iter().map(|c| c.abs()).sum::<i64>())
            .max()
            .unwrap_or(0);
        CyclotomicRing {
            p,
            modulus,
            basis,
            max_root_norm,
        }
    }

    /// Shared ring for modulus `p`, built once per process.
    pub fn get(p: u32) -> &'static CyclotomicRing {
        static RINGS: OnceLock<RwLock<HashMap<u32, &'static CyclotomicRing>>> = OnceLock::new();
        let cache = RINGS.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(r) = cache.read().expect("ring cache poisoned").get(&p) {
            return r;
        }
        let mut w = cache.write().expect("ring cache poisoned");
        w.entry(p)
            .or_insert_with(|| Box::leak(Box::new(CyclotomicRing::build(p))))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Degree of `Φ_p`, the rank of `Z[ω]` over `Z`.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// Largest reduced norm of a single root; for p | 4 this is 1.
    pub fn max_root_norm(&self) -> i64 {
        self.max_root_norm
    }

    /// Remainder of `Σ coeffs[k] x^k` modulo `Φ_p`, written into `out`.
    pub fn reduce_into(&self, coeffs: &[i64], out: &mut [i64]) {
        debug_assert_eq!(coeffs.len(), self.p as usize);
        debug_assert_eq!(out.len(), self.degree());
        out.iter_mut().for_each(|o| *o = 0);
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
    }

    pub fn reduce(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.degree()];
        self.reduce_into(coeffs, &mut out);
        out
    }

    pub fn is_zero(&self, coeffs: &[i64]) -> bool {
        if self.p == 4 {
            return coeffs[0] == coeffs[2] && coeffs[1] == coeffs[3];
        }
        if self.p == 2 {
            return coeffs[0] == coeffs[1];
        }
        self.reduce(coeffs).iter().all(|&c| c == 0)
    }
}

/// An exact sum of p-th roots of unity, `Σ coeffs[k] ω^k`.
///
/// Equality is equality of complex values, not of coefficient vectors.
#[derive(Clone, Debug)]
pub struct CycSum {
    p: u32,
    coeffs: Vec<i64>,
}

impl CycSum {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 1);
        CycSum {
            p,
            coeffs: vec![0; p as usize],
        }
    }

    pub fn root(p: u32, k: u32) -> Self {
        let mut s = CycSum::zero(p);
        s.coeffs[(k % p) as usize] = 1;
        s
    }

    pub fn integer(p: u32, n: i64) -> Self {
        let mut s = CycSum::zero(p);
        s.coeffs[0] = n;
        s
    }

    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), p as usize, "need exactly p coefficients");
        CycSum { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add_root(&mut self, k: u32) {
        self.coeffs[(k % self.p) as usize] += 1;
    }

    /// Complex conjugate: `ω^k -> ω^{-k}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut out = vec![0i64; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[(p - k) % p] += c;
        }
        CycSum { p: self.p, coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        CyclotomicRing::get(self.p).is_zero(&self.coeffs)
    }

    /// Canonical coordinates in the power basis `1, ω, …, ω^{φ(p)-1}`.
    pub fn reduced(&self) -> Vec<i64> {
        CyclotomicRing::get(self.p).reduce(&self.coeffs)
    }

    /// `(a, b)` with value `a + bi`, available when p divides 4.
    pub fn as_gaussian(&self) -> Option<(i64, i64)> {
        let c = &self.coeffs;
        match self.p {
            1 => Some((c[0], 0)),
            2 => Some((c[0] - c[1], 0)),
            4 => Some((c[0] - c[2], c[1] - c[3])),
            _ => None,
        }
    }

    /// Real integer value, if the sum is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r.iter().skip(1).all(|&c| c == 0) {
            Some(r.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let step = std::f64::consts::TAU / self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, step * k as f64))
            .sum()
    }

    /// `|a| + |b|` for a Gaussian integer; for other moduli the sum of
    /// absolute reduced coordinates, which is zero exactly when the value is.
    pub fn taxicab_norm(&self) -> i64 {
        match self.as_gaussian() {
            Some((a, b)) => a.abs() + b.abs(),
            None => self.reduced().iter().map(|c| c.abs()).sum(),
        }
    }

    fn check_same(&self, other: &CycSum) {
        assert_eq!(self.p, other.p, "mixing CycSums of different moduli");
    }
}

impl PartialEq for CycSum {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && (self.clone() - other.clone()).is_zero()
    }
}

impl Eq for CycSum {}

impl Add for CycSum {
    type Output = CycSum;
    fn add(mut self, rhs: CycSum) -> CycSum {
        self += rhs;
        self
    }
}

impl AddAssign for CycSum {
    fn add_assign(&mut self, rhs: CycSum) {
        self.check_same(&rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for CycSum {
    type Output = CycSum;
    fn neg(mut self) -> CycSum {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Sub for CycSum {
    type Output = CycSum;
    fn sub(self, rhs: CycSum) -> CycSum {
        self + (-rhs)
    }
}

impl Mul for CycSum {
    type Output = CycSum;
    fn mul(self, rhs: CycSum) -> CycSum {
        self.check_same(&rhs);
        let p = self.p as usize;
        let mut out = vec![0i64; p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[(i + j) % p] += a * b;
            }
        }
        CycSum { p: self.p, coeffs: out }
    }
}

impl fmt::Display for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.as_gaussian() {
            return match (a, b) {
                (a, 0) => write!(f, "{a}"),
                (0, b) => write!(f, "{b}i"),
                (a, b) if b < 0 => write!(f, "{a}{b}i"),
                (a, b) => write!(f, "{a}+{b}i"),
            };
        }
        let r = self.reduced();
        let terms: Vec<String> = r
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ => format!("{c}w^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
