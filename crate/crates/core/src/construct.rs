//! Building larger CCMs from smaller ones: Kronecker products, column
//! concatenation, and quad-phase matrices from dual pairs of ternary CCMs.

use crate::algebra::{integer_product, is_ccm, ternary_is_ccm, PhaseMatrix, Square, TernaryMatrix};
use crate::error::{CcmError, Result};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Exponent-level Kronecker product of two matrices over the same modulus.
pub(crate) fn kronecker_raw(a: &PhaseMatrix, b: &PhaseMatrix) -> PhaseMatrix {
    debug_assert_eq!(a.p(), b.p());
    let p = a.p();
    let (n1, k1) = a.shape();
    let (n2, k2) = b.shape();
    let (n, k) = (n1 * n2, k1 * k2);
    let mut exps = vec![0u8; n * k];
    for r1 in 0..n1 {
        for r2 in 0..n2 {
            for c1 in 0..k1 {
                for c2 in 0..k2 {
                    exps[(r1 * n2 + r2) * k + c1 * k2 + c2] = ((a.get(r1, c1) as u32 + b.get(r2, c2) as u32) % p) as u8;
                }
            }
        }
    }
    PhaseMatrix::from_raw(p, n, k, exps)
}

/// `M1 ⊗ M2`, entry `((n1,n2),(k1,k2)) = m1[n1,k1] · m2[n2,k2]`. Operands
/// with different moduli are lifted to the lcm.
pub fn kronecker(m1: &PhaseMatrix, m2: &PhaseMatrix) -> Result<PhaseMatrix> {
    let p = lcm(m1.p(), m2.p());
    let (a, b) = (m1.embed(p)?, m2.embed(p)?);
    let out = kronecker_raw(&a, &b);
    if is_ccm(m1) && is_ccm(m2) && !is_ccm(&out) {
        return Err(CcmError::TheoremViolation("Kronecker product of CCMs is not a CCM".into()));
    }
    Ok(out)
}

/// `[M1, M2]`.
pub fn concatenate(m1: &PhaseMatrix, m2: &PhaseMatrix) -> Result<PhaseMatrix> {
    concatenate_all(&[m1.clone(), m2.clone()])
}

/// Column-wise concatenation of any number of blocks with equal height and
/// modulus.
pub fn concatenate_all(blocks: &[PhaseMatrix]) -> Result<PhaseMatrix> {
    let first = blocks
        .first()
        .ok_or_else(|| CcmError::DimensionMismatch("nothing to concatenate".into()))?;
    let (p, n) = (first.p(), first.n_rows());
    for b in blocks {
        if b.p() != p {
            return Err(CcmError::ModulusMismatch(p, b.p()));
        }
        if b.n_rows() != n {
            return Err(CcmError::DimensionMismatch(format!(
                "cannot concatenate {}-row and {}-row matrices",
                n,
                b.n_rows()
            )));
        }
    }
    let k: usize = blocks.iter().map(PhaseMatrix::n_cols).sum();
    let mut exps = Vec::with_capacity(n * k);
    for r in 0..n {
        for b in blocks {
            exps.extend_from_slice(b.row(r));
        }
    }
    let out = PhaseMatrix::from_raw(p, n, k, exps);
    if blocks.iter().all(is_ccm) && !is_ccm(&out) {
        return Err(CcmError::TheoremViolation("concatenation of CCMs is not a CCM".into()));
    }
    Ok(out)
}

/// `B Aᵀ - A Bᵀ`, the cross term of `Z Z*` for `Z = A + iB`.
pub fn commutator(a: &TernaryMatrix, b: &TernaryMatrix) -> Result<Square<i64>> {
    if a.shape() != b.shape() {
        return Err(CcmError::DimensionMismatch("dual pair parts differ in shape".into()));
    }
    let ba = integer_product(b, a);
    let ab = integer_product(a, b);
    let n = a.n_rows();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| ba.get(i, j) - ab.get(i, j)).collect())
        .collect();
    Square::from_rows(rows)
}

/// Condition (i): exactly one of `A[n,k]`, `B[n,k]` is nonzero everywhere.
pub fn is_dual_pair(a: &TernaryMatrix, b: &TernaryMatrix) -> bool {
    a.shape() == b.shape() && a.entries().iter().zip(b.entries()).all(|(x, y)| x.abs() + y.abs() == 1)
}

/// `Z = A + iB` after checking every hypothesis, then re-checking that `Z` is
/// a CCM.
pub fn dual_pair_combine(a: &TernaryMatrix, b: &TernaryMatrix) -> Result<PhaseMatrix> {
    if a.shape() != b.shape() {
        return Err(CcmError::DimensionMismatch("dual pair parts differ in shape".into()));
    }
    if !ternary_is_ccm(a) {
        return Err(CcmError::NotTernaryCcm("A"));
    }
    if !ternary_is_ccm(b) {
        return Err(CcmError::NotTernaryCcm("B"));
    }
    let k = a.n_cols();
    if let Some(i) = (0..a.entries().len()).find(|&i| a.entries()[i].abs() + b.entries()[i].abs() != 1) {
        return Err(CcmError::NotDualPair { row: i / k, col: i % k });
    }
    if !commutator(a, b)?.is_diagonally_regular() {
        return Err(CcmError::CommutatorNotRegular);
    }
    let exps = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(&x, &y)| match (x, y) {
            (1, _) => 0,
            (_, 1) => 1,
            (-1, _) => 2,
            _ => 3,
        })
        .collect();
    let z = PhaseMatrix::from_raw(4, a.n_rows(), k, exps);
    if !is_ccm(&z) {
        return Err(CcmError::TheoremViolation("dual pair combined to a non-CCM".into()));
    }
    Ok(z)
}

/// Real and imaginary parts of a quad-phase matrix.
pub fn dual_pair_split(z: &PhaseMatrix) -> Result<(TernaryMatrix, TernaryMatrix)> {
    if z.p() != 4 {
        return Err(CcmError::RequiresQuadPhase {
            op: "dual_pair_split",
            p: z.p(),
        });
    }
    let re = |e: u8| [1i8, 0, -1, 0][e as usize];
    let im = |e: u8| [0i8, 1, 0, -1][e as usize];
    let (n, k) = z.shape();
    Ok((
        TernaryMatrix::new(n, k, z.exps().iter().map(|&e| re(e)).collect())?,
        TernaryMatrix::new(n, k, z.exps().iter().map(|&e| im(e)).collect())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(t: &str) -> PhaseMatrix {
        PhaseMatrix::parse_quad(t).unwrap()
    }

    #[test]
    fn golay_squared_is_a_ccm() {
        let g = quad("[[1,1],[1,-1]]");
        let k = kronecker(&g, &g).unwrap();
        assert_eq!(k.shape(), (4, 4));
        assert!(is_ccm(&k));
        assert_eq!(kronecker(&g, &PhaseMatrix::ones(4, 1, 1).unwrap()).unwrap(), g);
    }

    #[test]
    fn mixed_moduli_lift_to_lcm() {
        let a = PhaseMatrix::new(2, 1, 2, vec![0, 1]).unwrap();
        let b = PhaseMatrix::new(3, 1, 1, vec![1]).unwrap();
        let k = kronecker(&a, &b).unwrap();
        assert_eq!(k.p(), 6);
        assert_eq!(k.exps(), &[2, 5]);
    }

    #[test]
    fn concatenation_checks_heights() {
        let g = quad("[[1,1],[1,-1]]");
        assert!(is_ccm(&concatenate(&g, &g).unwrap()));
        assert_eq!(concatenate_all(std::slice::from_ref(&g)).unwrap(), g);
        let tall = PhaseMatrix::ones(4, 3, 2).unwrap();
        assert!(matches!(concatenate(&g, &tall), Err(CcmError::DimensionMismatch(_))));
    }

    #[test]
    fn worked_split_round_trips() {
        let m = quad("[[-1,-1,-i,-i],[-i,-i,i,i],[i,-i,-1,1],[i,-i,i,-i]]");
        let (a, b) = dual_pair_split(&m).unwrap();
        let a_ref = TernaryMatrix::from_rows(&[
            vec![-1, -1, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, -1, 1],
            vec![0, 0, 0, 0],
        ])
        .unwrap();
        let b_ref = TernaryMatrix::from_rows(&[
            vec![0, 0, -1, -1],
            vec![-1, -1, 1, 1],
            vec![1, -1, 0, 0],
            vec![1, -1, 1, -1],
        ])
        .unwrap();
        assert_eq!((a.clone(), b.clone()), (a_ref, b_ref));
        assert_eq!(dual_pair_combine(&a, &b).unwrap(), m);
    }

    #[test]
    fn sign_matrix_with_zero_imaginary_part() {
        let a = TernaryMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        let b = TernaryMatrix::zeros(2, 2).unwrap();
        assert_eq!(dual_pair_combine(&a, &b).unwrap(), quad("[[1,1],[1,-1]]"));
        let holes = TernaryMatrix::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(matches!(dual_pair_combine(&holes, &b), Err(CcmError::NotDualPair { row: 0, col: 1 })));
    }
}
