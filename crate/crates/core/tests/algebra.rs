mod common;

use ccm::algebra::{
    composite_autocorrelation, cyc_is_zero, has_orthogonal_rows, row_correlation, row_gramian, CycSum,
    CyclotomicRing,
};
use ccm::archive::{parse_archive, Record};
use ccm::{is_ccm, PhaseMatrix};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() < FLOAT_TOL
}

fn check_all_characterizations(m: &PhaseMatrix) -> bool {
    let n = m.n_rows() as isize;
    for j in -(n - 1)..n {
        let a = composite_autocorrelation(m, j).unwrap();
        let r = row_correlation(m, j).unwrap();
        let f = float_composite_acf(m, j);
        assert!(close(a.to_complex(), f), "{m} lag {j}");
        assert!(close(r.to_complex(), f), "{m} lag {j}");
    }
    let fast = is_ccm(m);
    assert_eq!(fast, float_is_ccm(m), "{m}");
    assert_eq!(fast, row_gramian(m).is_diagonally_regular(), "{m}");
    fast
}

#[test]
fn binary_characterizations_agree_exhaustively() {
    let mut ccms = 0;
    for n in 1..=9 {
        for k in 1..=9 / n {
            for m in all_matrices(2, n, k) {
                ccms += check_all_characterizations(&m) as usize;
            }
        }
    }
    assert!(ccms > 0);
}

#[test]
fn quad_phase_characterizations_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (n, k) = (rng.gen_range(1..=6), rng.gen_range(1..=5));
        check_all_characterizations(&random_matrix(&mut rng, 4, n, k));
    }
}

#[test]
fn other_moduli_agree_with_floating_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3, 5, 6, 8, 12] {
        for _ in 0..200 {
            let (n, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let m = random_matrix(&mut rng, p, n, k);
            check_all_characterizations(&m);
        }
    }
}

#[test]
fn zero_test_matches_floating_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in 1..=36u32 {
        let ring = CyclotomicRing::get(p);
        for _ in 0..300 {
            let coeffs: Vec<i64> = (0..p).map(|_| rng.gen_range(-2..=2)).collect();
            let s = CycSum::from_coeffs(p, coeffs.clone());
            let z: num_complex::Complex64 = coeffs.iter().enumerate().map(|(e, &c)| root(p, e as u32) * c as f64).sum();
            assert_eq!(cyc_is_zero(&s), z.norm() < 1e-7, "p={p} {coeffs:?}");
            assert_eq!(ring.is_zero(&coeffs), cyc_is_zero(&s));
        }
        // A full set of roots always cancels (except for p = 1).
        assert_eq!(cyc_is_zero(&CycSum::from_coeffs(p, vec![1; p as usize])), p > 1);
    }
}

#[test]
fn hadamard_rows_are_orthogonal() {
    let h = PhaseMatrix::parse_quad("[[1,1,1,1],[1,-1,1,-1],[1,1,-1,-1],[1,-1,-1,1]]").unwrap();
    assert!(has_orthogonal_rows(&h));
    assert!(is_ccm(&h));
    assert!(!has_orthogonal_rows(&PhaseMatrix::parse_quad("[[1,1],[1,1]]").unwrap()));
}

proptest! {
    #[test]
    fn archive_round_trip(p in 1u32..=36, n in 1usize..5, k in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, p, n, k);
        let text = format!("{m}\n");
        prop_assert_eq!(parse_archive(&text).unwrap(), vec![Record::Phase(m)]);
    }
}
