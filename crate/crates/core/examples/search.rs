//! Pruned exhaustive search for p-phase CCMs, with pruning statistics and an
//! optional checkpoint file.
//!
//! `cargo run --release --example search -- 4 4 4 [checkpoint.jsonl]`

use std::path::PathBuf;

use ccm::search::{brute_force_ccm, run_search, search_ternary_ccm, SearchConfig, SearchHooks};
use ccm::symmetry::canonical_form;

fn main() -> ccm::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let (p, n, k) = (num(0, 4) as u32, num(1, 3), num(2, 4));

    let mut cfg = SearchConfig::new(p, n, k);
    cfg.emit_raw = true;
    let hooks = SearchHooks {
        checkpoint: args.get(3).map(PathBuf::from),
        progress: None,
    };
    let out = run_search(&cfg, &hooks)?;
    let s = &out.stats;
    println!("{p}-phase {n}x{k}: {} raw matrices", out.matrices.len());
    println!(
        "  {} branches ({} resumed), {} nodes, {} taxicab cuts, {} reversal cuts",
        s.branches, s.resumed_branches, s.nodes, s.taxicab_pruned, s.reversal_pruned
    );
    for m in out.matrices.iter().take(3) {
        println!("  {m}");
    }

    // Distinct classes, and the same classes from brute force when that is cheap.
    let classes: std::collections::BTreeSet<_> =
        out.matrices.iter().map(canonical_form).collect::<ccm::Result<_>>()?;
    println!("  {} equivalence classes", classes.len());
    if (p as f64).powi((n * k) as i32) <= 1e7 {
        let brute: std::collections::BTreeSet<_> =
            brute_force_ccm(p, n, k, false)?.iter().map(canonical_form).collect::<ccm::Result<_>>()?;
        println!("  brute force: {} classes, identical: {}", brute.len(), brute == classes);
    }

    let ternary = search_ternary_ccm(2, 3, false)?;
    println!("ternary 2x3 CCMs: {}", ternary.len());
    Ok(())
}
