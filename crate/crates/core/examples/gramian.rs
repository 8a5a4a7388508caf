//! The CCM test three ways: composite autocorrelation, the row Gramian's
//! diagonals, and the fast histogram check.

use ccm::algebra::{composite_autocorrelation, row_correlation, row_gramian, CorrelationProfile};
use ccm::{is_ccm, PhaseMatrix};

fn main() -> ccm::Result<()> {
    let m = PhaseMatrix::parse_quad("[[1,1,1,1],[1,-1,-1,-1],[1,1,-1,-1]]")?;
    println!("M =\n{}", m.to_quad_string().unwrap());
    println!("M M* =\n{}", row_gramian(&m));

    let n = m.n_rows() as isize;
    for j in -(n - 1)..n {
        let a = composite_autocorrelation(&m, j)?;
        let r = row_correlation(&m, j)?;
        println!("lag {j:+}: A_M = {:?}, R_M = {:?}", a.as_gaussian().unwrap(), r.as_gaussian().unwrap());
    }
    println!("is_ccm: {}", is_ccm(&m));

    // Changing one entry breaks it.
    let broken = PhaseMatrix::parse_quad("[[1,1,1,1],[1,-1,-1,-1],[1,1,-1,i]]")?;
    let profile = CorrelationProfile::of_matrix(&broken)?;
    println!("perturbed: is_ccm {}, zero sidelobes {}", is_ccm(&broken), profile.has_zero_sidelobes());
    Ok(())
}
