//! Quad-phase CCMs from dual pairs of ternary CCMs, and back.

use ccm::algebra::ternary_is_ccm;
use ccm::construct::{commutator, dual_pair_combine, dual_pair_split, is_dual_pair};
use ccm::search::search_ternary_ccm;
use ccm::{is_ccm, PhaseMatrix};

fn main() -> ccm::Result<()> {
    let m = PhaseMatrix::parse_quad("[[-1,-1,-i,-i],[-i,-i,i,i],[i,-i,-1,1],[i,-i,i,-i]]")?;
    let (a, b) = dual_pair_split(&m)?;
    println!("M = {}", m.to_quad_string().unwrap());
    println!("A = {a}\nB = {b}");
    println!("A, B ternary CCMs: {} {}", ternary_is_ccm(&a), ternary_is_ccm(&b));
    println!("dual pair: {}, BA^T - AB^T diagonally regular: {}", is_dual_pair(&a, &b), commutator(&a, &b)?.is_diagonally_regular());
    println!("A + iB == M: {}", dual_pair_combine(&a, &b)? == m);

    // Every admissible pair of 2x2 ternary CCMs.
    let t = search_ternary_ccm(2, 2, false)?;
    let mut made = std::collections::BTreeSet::new();
    for a in &t {
        for b in &t {
            if is_dual_pair(a, b) && commutator(a, b)?.is_diagonally_regular() {
                let z = dual_pair_combine(a, b)?;
                assert!(is_ccm(&z));
                made.insert(z);
            }
        }
    }
    println!("{} ternary 2x2 CCMs combine into {} distinct quad-phase CCMs", t.len(), made.len());
    Ok(())
}
