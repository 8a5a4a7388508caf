mod common;

use std::collections::BTreeSet;
use std::fs;

use ccm::algebra::{row_product, CyclotomicRing};
use ccm::search::{
    all_rows, brute_force_ccm, run_search, search_ccm, search_ternary_ccm, zero_sum_tuples, SearchConfig,
    SearchHooks,
};
use ccm::symmetry::canonical_form;
use ccm::{is_ccm, CcmError, PhaseMatrix, TernaryMatrix};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn classes(ms: &[PhaseMatrix]) -> BTreeSet<PhaseMatrix> {
    ms.iter().map(|m| canonical_form(m).unwrap()).collect()
}

fn raw(cfg: &SearchConfig) -> Vec<PhaseMatrix> {
    let mut c = cfg.clone();
    c.emit_raw = true;
    search_ccm(&c).unwrap()
}

#[test]
fn pruned_search_finds_every_class_brute_force_finds() {
    let mut shapes = vec![(4, 2, 4), (4, 3, 4)];
    for n in 1..=4 {
        for k in 1..=4 {
            shapes.push((2, n, k));
        }
    }
    shapes.extend([(3, 2, 3), (3, 3, 3), (3, 4, 3), (6, 2, 3), (5, 2, 4)]);
    for (p, n, k) in shapes {
        let brute = brute_force_ccm(p, n, k, false).unwrap();
        assert!(brute.iter().all(float_is_ccm));
        let found = raw(&SearchConfig::new(p, n, k));
        assert!(found.iter().all(is_ccm), "{p} {n}x{k}");
        assert_eq!(classes(&found), classes(&brute), "{p}-phase {n}x{k}");
    }
}

#[test]
fn brute_force_agrees_with_floating_point_enumeration() {
    for (p, n, k) in [(2, 2, 2), (2, 3, 2), (4, 2, 2), (3, 2, 2), (2, 2, 4)] {
        let expect: Vec<PhaseMatrix> = all_matrices(p, n, k).filter(float_is_ccm).collect();
        assert_eq!(brute_force_ccm(p, n, k, false).unwrap(), expect);
    }
}

#[test]
fn search_output_is_normalized() {
    for n in 3..=4 {
        for m in raw(&SearchConfig::new(4, n, 4)) {
            assert!(m.row(0).iter().all(|&e| e == 0));
            assert_eq!(m.get(1, 0), 0);
        }
    }
}

#[test]
fn every_pruning_combination_yields_the_same_classes() {
    for n in 2..=4 {
        let base = classes(&raw(&SearchConfig::new(4, n, 4).unpruned()));
        for bits in 0..8 {
            let mut cfg = SearchConfig::new(4, n, 4);
            cfg.prune_reversal = bits & 1 != 0;
            cfg.prune_sorted_rows = bits & 2 != 0;
            cfg.sort_middle_row = bits & 4 != 0;
            let found = raw(&cfg);
            assert_eq!(classes(&found), base, "{n}x4 flags {bits:03b}");
        }
    }
}

#[test]
fn pruning_only_removes_matrices() {
    let full: BTreeSet<_> = raw(&SearchConfig::new(4, 4, 4).unpruned()).into_iter().collect();
    let pruned: BTreeSet<_> = raw(&SearchConfig::new(4, 4, 4)).into_iter().collect();
    assert!(pruned.is_subset(&full));
    assert!(pruned.len() < full.len());
}

#[test]
fn single_term_taxicab_bound_and_subadditivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [2, 3, 4, 5, 6, 8] {
        let k = 3;
        let bound = k as i64 * CyclotomicRing::get(p).max_root_norm();
        let rows = all_rows(p, k);
        for a in &rows {
            for b in &rows {
                let m = PhaseMatrix::from_rows(p, &[a.clone(), b.clone()]).unwrap();
                assert!(row_product(&m, 0, 1).taxicab_norm() <= bound, "p={p}");
            }
        }
        for _ in 0..500 {
            let m = random_matrix(&mut rng, p, 4, k);
            let (x, y) = (row_product(&m, 0, 1), row_product(&m, 2, 3));
            let mut sum = x.clone();
            for (e, &c) in y.coeffs().iter().enumerate() {
                for _ in 0..c {
                    sum.add_root(e as u32);
                }
            }
            assert!(sum.taxicab_norm() <= x.taxicab_norm() + y.taxicab_norm());
        }
    }
}

#[test]
fn zero_sum_tuples_match_floating_point() {
    for (p, k) in [(4, 2), (4, 4), (3, 3), (2, 4), (6, 3)] {
        let expect: Vec<Vec<u8>> = all_matrices(p, 1, k)
            .filter(|r| to_complex(r)[0].iter().sum::<num_complex::Complex64>().norm() < FLOAT_TOL)
            .map(|r| r.row(0).to_vec())
            .collect();
        assert_eq!(zero_sum_tuples(p, k), expect);
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let mut one = SearchConfig::new(4, 4, 4);
    one.emit_raw = true;
    one.jobs = 1;
    let mut eight = one.clone();
    eight.jobs = 8;
    assert_eq!(search_ccm(&one).unwrap(), search_ccm(&eight).unwrap());
}

#[test]
fn checkpoint_resume_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.jsonl");
    let mut cfg = SearchConfig::new(4, 4, 4);
    cfg.emit_raw = true;
    let hooks = SearchHooks {
        checkpoint: Some(path.clone()),
        progress: None,
    };
    let first = run_search(&cfg, &hooks).unwrap();
    assert_eq!(first.stats.resumed_branches, 0);

    // Keep the header and half the branches, plus a torn trailing line.
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), first.stats.branches + 1);
    let keep = 1 + first.stats.branches / 2;
    let mut cut = lines[..keep].join("\n");
    cut.push_str("\n{\"branch\": 7, \"nod");
    fs::write(&path, cut).unwrap();

    let second = run_search(&cfg, &hooks).unwrap();
    assert_eq!(second.stats.resumed_branches, keep - 1);
    assert_eq!(second.matrices, first.matrices);
    assert_eq!(second.stats.nodes, first.stats.nodes);

    let third = run_search(&cfg, &hooks).unwrap();
    assert_eq!(third.stats.resumed_branches, first.stats.branches);
    assert_eq!(third.matrices, first.matrices);

    let other = SearchConfig::new(4, 3, 4);
    assert!(matches!(run_search(&other, &hooks), Err(CcmError::Parse { .. })));
}

fn ternary_oracle(n: usize, k: usize) -> Vec<TernaryMatrix> {
    let mut out = Vec::new();
    for code in 0..3u32.pow((n * k) as u32) {
        let mut c = code;
        let entries: Vec<i8> = (0..n * k)
            .map(|_| {
                let d = (c % 3) as i8 - 1;
                c /= 3;
                d
            })
            .collect();
        let t = TernaryMatrix::new(n, k, entries).unwrap();
        // Composite autocorrelation straight from the definition.
        let ok = (1..n).all(|j| {
            let s: i64 = (0..k)
                .map(|col| (0..n - j).map(|i| (t.get(i, col) * t.get(i + j, col)) as i64).sum::<i64>())
                .sum();
            s == 0
        });
        if ok {
            out.push(t);
        }
    }
    out.sort();
    out
}

#[test]
fn ternary_search_matches_exhaustive_oracle() {
    for (n, k) in [(1, 3), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (4, 2)] {
        assert_eq!(search_ternary_ccm(n, k, false).unwrap(), ternary_oracle(n, k), "{n}x{k}");
    }
}

#[test]
fn guards_refuse_oversized_requests() {
    assert!(matches!(search_ccm(&SearchConfig::new(4, 40, 4)), Err(CcmError::GuardExceeded(_))));
    assert!(matches!(brute_force_ccm(4, 4, 4, false), Err(CcmError::GuardExceeded(_))));
    assert!(matches!(search_ternary_ccm(5, 4, false), Err(CcmError::GuardExceeded(_))));
}
