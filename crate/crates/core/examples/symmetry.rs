//! The complementary symmetry group: generators, normal forms, normalization
//! and equivalence classes.

use ccm::symmetry::{canonical_form, normalize, normalized_orbit, orbit, orbit_size, Generator, Word};
use ccm::{is_ccm, PhaseMatrix, SymmetryElement};

fn main() -> ccm::Result<()> {
    let m = PhaseMatrix::parse_quad("[[-1,-1,-i,-1],[-i,-i,1,1],[-1,-1,1,1],[i,-i,-1,-i]]")?;
    let (p, n, k) = (m.p(), m.n_rows(), m.n_cols());
    println!("M = {}  ccm: {}", m.to_quad_string().unwrap(), is_ccm(&m));

    // Any word in the generators collapses to a single normal form.
    let word = Word::new(vec![
        Generator::Prog(1),
        Generator::Rev(vec![true, false, false, true]),
        Generator::Perm(vec![1, 0, 3, 2]),
        Generator::Conj,
        Generator::Mult(vec![0, 1, 2, 3]),
    ]);
    let g = word.normal_form(p, n, k);
    println!("word normal form: {g}");
    assert_eq!(g.apply(&m)?, word.apply(&m));
    println!("g M ccm: {}", is_ccm(&g.apply(&m)?));
    println!("g^-1 g M == M: {}", g.inverse().apply(&g.apply(&m)?)? == m);

    let (m2, h) = normalize(&m);
    println!("normalized: {}  via {h}", m2.to_quad_string().unwrap());

    println!("|normal forms| for p={p}, K={k}: {}", SymmetryElement::normal_form_count(p, k));
    let full = orbit(&m)?;
    println!("orbit size {} (closure and normal forms agree)", full.size());
    println!("first-row-normalized members: {}", normalized_orbit(&m)?.len());
    println!("orbit_size via normalized orbit: {}", orbit_size(&m)?);
    let c = canonical_form(&m)?;
    println!("canonical: {c}");
    assert_eq!(&c, full.canonical());
    Ok(())
}
