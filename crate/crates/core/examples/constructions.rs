//! Growing CCMs: Kronecker products (across moduli) and column concatenation.

use ccm::construct::{concatenate, concatenate_all, kronecker};
use ccm::symmetry::orbit_size;
use ccm::{is_ccm, PhaseMatrix};

fn main() -> ccm::Result<()> {
    let golay = PhaseMatrix::parse_quad("[[1,1],[1,-1]]")?;
    let g2 = kronecker(&golay, &golay)?;
    println!("G (x) G = {g2}  ccm {}", is_ccm(&g2));

    // Quad-phase times ternary lands in the twelfth roots of unity.
    let tri = PhaseMatrix::new(3, 1, 3, vec![0, 1, 2])?;
    let mixed = kronecker(&golay, &tri)?;
    println!("G (x) [1 w w^2] = {mixed}  ccm {}", is_ccm(&mixed));

    let quad = PhaseMatrix::new(4, 2, 2, vec![0, 0, 0, 2])?;
    let wide = concatenate(&quad, &quad)?;
    println!("[G, G] = {wide}  ccm {}  orbit {}", is_ccm(&wide), orbit_size(&wide)?);
    let wider = concatenate_all(&[quad.clone(), PhaseMatrix::new(4, 2, 2, vec![0, 1, 0, 3])?, quad])?;
    println!("[G, G', G] = {wider}  ccm {}", is_ccm(&wider));

    match concatenate(&golay, &PhaseMatrix::ones(4, 3, 2)?) {
        Err(e) => println!("mismatched heights: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
