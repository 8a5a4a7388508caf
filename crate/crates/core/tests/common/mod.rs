//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's arithmetic; values are computed from first
//! principles with floating point or direct index manipulation.

#![allow(dead_code)]

use std::path::PathBuf;

use ccm::symmetry::Generator;
use ccm::PhaseMatrix;
use num_complex::Complex64;
use rand::Rng;

pub const FLOAT_TOL: f64 = 1e-9;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn root(p: u32, e: u32) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / p as f64)
}

pub fn to_complex(m: &PhaseMatrix) -> Vec<Vec<Complex64>> {
    (0..m.n_rows())
        .map(|r| m.row(r).iter().map(|&e| root(m.p(), e as u32)).collect())
        .collect()
}

/// `Σ_k Σ_i x[i,k] conj(x[i+j,k])` in floating point.
pub fn float_composite_acf(m: &PhaseMatrix, j: isize) -> Complex64 {
    let x = to_complex(m);
    let n = x.len() as isize;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let t = i + j;
        if (0..n).contains(&t) {
            for (a, b) in x[i as usize].iter().zip(&x[t as usize]) {
                s += a * b.conj();
            }
        }
    }
    s
}

pub fn float_is_ccm(m: &PhaseMatrix) -> bool {
    let n = m.n_rows() as isize;
    (1..n).all(|j| float_composite_acf(m, j).norm() < FLOAT_TOL)
}

pub fn random_matrix(rng: &mut impl Rng, p: u32, n: usize, k: usize) -> PhaseMatrix {
    let exps = (0..n * k).map(|_| rng.gen_range(0..p) as u8).collect();
    PhaseMatrix::new(p, n, k, exps).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

pub fn random_generator(rng: &mut impl Rng, p: u32, k: usize) -> Generator {
    match rng.gen_range(0..5) {
        0 => Generator::Conj,
        1 => Generator::Perm(random_perm(rng, k)),
        2 => Generator::Mult((0..k).map(|_| rng.gen_range(0..p) as u8).collect()),
        3 => Generator::Rev((0..k).map(|_| rng.gen()).collect()),
        _ => Generator::Prog(rng.gen_range(0..p) as u8),
    }
}

/// Direct action of one generator, written out index by index.
pub fn naive_apply(g: &Generator, m: &PhaseMatrix) -> PhaseMatrix {
    let (p, (n, k)) = (m.p(), m.shape());
    let at = |r: usize, c: usize| m.get(r, c) as u32;
    let neg = |e: u32| (p - e % p) % p;
    let mut rows = vec![vec![0u8; k]; n];
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let e = match g {
                Generator::Conj => neg(at(r, c)),
                Generator::Perm(s) => at(r, s[c]),
                Generator::Mult(u) => at(r, c) + u[c] as u32,
                Generator::Rev(t) if t[c] => neg(at(n - 1 - r, c)),
                Generator::Rev(_) => at(r, c),
                Generator::Prog(b) => at(r, c) + *b as u32 * (r as u32 + 1),
            };
            *slot = (e % p) as u8;
        }
    }
    PhaseMatrix::from_rows(p, &rows).unwrap()
}

pub fn naive_apply_word(word: &[Generator], m: &PhaseMatrix) -> PhaseMatrix {
    word.iter().rev().fold(m.clone(), |acc, g| naive_apply(g, &acc))
}

/// Every matrix of a shape, in lexicographic order.
pub fn all_matrices(p: u32, n: usize, k: usize) -> impl Iterator<Item = PhaseMatrix> {
    let cells = n * k;
    let total = (p as u64).pow(cells as u32);
    (0..total).map(move |mut code| {
        let mut exps = vec![0u8; cells];
        for slot in exps.iter_mut().rev() {
            *slot = (code % p as u64) as u8;
            code /= p as u64;
        }
        PhaseMatrix::new(p, n, k, exps).unwrap()
    })
}
