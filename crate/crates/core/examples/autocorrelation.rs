//! Aperiodic autocorrelation of single codes and of code matrices.
//!
//! Run with `cargo run --example autocorrelation`.

use ccm::algebra::{autocorrelation, CorrelationProfile};
use ccm::{PhaseCode, PhaseMatrix};

fn show(name: &str, profile: &CorrelationProfile) {
    let vals: Vec<String> = profile
        .iter()
        .map(|(_, v)| match v.as_gaussian() {
            Some((re, 0)) => re.to_string(),
            Some((re, im)) => format!("{re}{im:+}i"),
            None => format!("{:.3}", v.to_complex()),
        })
        .collect();
    println!("{name:>10}: [{}]", vals.join(", "));
}

fn main() -> ccm::Result<()> {
    let barker = PhaseCode::binary(&[1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1])?;
    let profile = CorrelationProfile::of_code(&barker)?;
    show("barker-13", &profile);
    let peak_sidelobe = profile
        .iter()
        .filter(|&(j, _)| j != 0)
        .map(|(_, v)| v.as_integer().unwrap().abs())
        .max()
        .unwrap();
    println!("peak sidelobe {peak_sidelobe}");

    // A Golay pair: each code alone has sidelobes, the pair does not.
    let x1 = PhaseCode::binary(&[1, 1, -1, 1])?;
    let x2 = PhaseCode::binary(&[1, 1, 1, -1])?;
    show("x1", &CorrelationProfile::of_code(&x1)?);
    show("x2", &CorrelationProfile::of_code(&x2)?);
    let pair = PhaseMatrix::from_columns(2, &[x1, x2])?;
    let composite = CorrelationProfile::of_matrix(&pair)?;
    show("x1 + x2", &composite);
    println!("zero sidelobes: {}", composite.has_zero_sidelobes());

    // Quad-phase values are Gaussian integers.
    let q = PhaseCode::new(4, vec![2, 2, 3])?;
    for j in -2..=2 {
        let (re, im) = autocorrelation(&q, j)?.as_gaussian().unwrap();
        println!("A({j:+}) = {re}{im:+}i");
    }
    Ok(())
}
