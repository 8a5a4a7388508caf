//! Equivalence-class census of quad-phase Nx4 CCMs with the construction
//! flags for each class.
//!
//! `cargo run --release --example census -- 2 3 4`  (add 5 and 6 for the larger shapes)

use std::time::Instant;

use ccm::classify::{census, FactorPool};
use ccm::search::{search_ccm, SearchConfig};

fn main() -> ccm::Result<()> {
    let mut heights: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if heights.is_empty() {
        heights = vec![2, 3, 4];
    }
    println!("{:>5} {:>7} {:>8} {:>9} {:>5} {:>10} {:>7} {:>6}", "shape", "raw", "classes", "hadamard", "dual", "kron(+inc)", "concat", "secs");
    for n in heights {
        let t = Instant::now();
        let mut cfg = SearchConfig::new(4, n, 4);
        cfg.emit_raw = true;
        let raw = search_ccm(&cfg)?;
        let pool = FactorPool::for_target(4, n, 4, 0)?;
        let c = census(&raw, &pool)?;
        let s = c.summary();
        println!(
            "{:>5} {:>7} {:>8} {:>9} {:>5} {:>10} {:>7} {:>6.1}",
            format!("{n}x4"),
            raw.len(),
            s.classes,
            s.hadamard,
            s.dual_pair.unwrap_or(0),
            format!("{}({})", s.kronecker, s.kronecker_inclusive),
            s.concatenation,
            t.elapsed().as_secs_f64()
        );
        if n == 2 {
            print!("{}", c.to_csv());
        }
    }
    Ok(())
}
