//! Aperiodic autocorrelation, row Gramians and the CCM test.

use super::cyclotomic::{CycSum, CyclotomicRing};
use super::matrix::{PhaseCode, PhaseMatrix, Square, TernaryMatrix};
use crate::error::{CcmError, Result};

fn check_lag(lag: isize, n: usize) -> Result<()> {
    if lag.unsigned_abs() >= n {
        Err(CcmError::LagOutOfRange {
            lag,
            max: n.saturating_sub(1),
        })
    } else {
        Ok(())
    }
}

/// `A_x(j) = Σ_i a_i conj(a_{i+j})` for `j >= 0`, and `conj(A_x(-j))` below.
pub fn autocorrelation(code: &PhaseCode, lag: isize) -> Result<CycSum> {
    let n = code.len();
    check_lag(lag, n)?;
    let p = code.p();
    let j = lag.unsigned_abs();
    let e = code.exps();
    let mut s = CycSum::zero(p);
    for i in 0..n - j {
        s.add_root(e[i] as u32 + p - e[i + j] as u32);
    }
    Ok(if lag < 0 { s.conj() } else { s })
}

/// Sum of the column autocorrelations at `lag`.
pub fn composite_autocorrelation(m: &PhaseMatrix, lag: isize) -> Result<CycSum> {
    check_lag(lag, m.n_rows())?;
    let mut s = CycSum::zero(m.p());
    for col in m.columns() {
        s += autocorrelation(&col, lag)?;
    }
    Ok(s)
}

/// Inner product `r_a · conj(r_b)` of two rows.
pub fn row_product(m: &PhaseMatrix, a: usize, b: usize) -> CycSum {
    let p = m.p();
    let mut s = CycSum::zero(p);
    for (&x, &y) in m.row(a).iter().zip(m.row(b)) {
        s.add_root(x as u32 + p - y as u32);
    }
    s
}

/// `M M*`: entry `(i, j)` is `r_i · conj(r_j)`.
pub fn row_gramian(m: &PhaseMatrix) -> Square<CycSum> {
    let n = m.n_rows();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| row_product(m, i, j)).collect())
        .collect();
    Square::from_rows(rows).expect("gramian is square")
}

/// `R_M(j) = Σ_i r_i · conj(r_{i+j})`, conjugated for negative lags.
pub fn row_correlation(m: &PhaseMatrix, lag: isize) -> Result<CycSum> {
    let n = m.n_rows();
    check_lag(lag, n)?;
    let j = lag.unsigned_abs();
    let mut s = CycSum::zero(m.p());
    for i in 0..n - j {
        s += row_product(m, i, i + j);
    }
    Ok(if lag < 0 { s.conj() } else { s })
}

/// Values of a correlation function at every lag `-(N-1)..=N-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationProfile {
    len: usize,
    values: Vec<CycSum>,
}

impl CorrelationProfile {
    fn collect(len: usize, f: impl Fn(isize) -> Result<CycSum>) -> Result<Self> {
        let max = len as isize - 1;
        let values = (-max..=max).map(f).collect::<Result<Vec<_>>>()?;
        Ok(CorrelationProfile { len, values })
    }

    pub fn of_code(code: &PhaseCode) -> Result<Self> {
        Self::collect(code.len(), |j| autocorrelation(code, j))
    }

    pub fn of_matrix(m: &PhaseMatrix) -> Result<Self> {
        Self::collect(m.n_rows(), |j| composite_autocorrelation(m, j))
    }

    pub fn max_lag(&self) -> usize {
        self.len - 1
    }

    pub fn get(&self, lag: isize) -> Option<&CycSum> {
        let idx = lag + self.max_lag() as isize;
        usize::try_from(idx).ok().and_then(|i| self.values.get(i))
    }

    /// `(lag, value)` pairs in increasing lag order.
    pub fn iter(&self) -> impl Iterator<Item = (isize, &CycSum)> {
        let max = self.max_lag() as isize;
        self.values.iter().enumerate().map(move |(i, v)| (i as isize - max, v))
    }

    /// Values as integers; `None` if any value is not a rational integer.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.values.iter().map(CycSum::as_integer).collect()
    }

    /// True when every lag except 0 is zero.
    pub fn has_zero_sidelobes(&self) -> bool {
        self.iter().all(|(j, v)| j == 0 || v.is_zero())
    }
}

/// Stack-friendly CCM test: histogram the phase differences per lag and
/// reduce modulo `Φ_p`.
pub fn is_ccm(m: &PhaseMatrix) -> bool {
    let p = m.p() as usize;
    let ring = CyclotomicRing::get(m.p());
    let k = m.n_cols();
    let e = m.exps();
    let mut hist = vec![0i64; p];
    for j in 1..m.n_rows() {
        hist.iter_mut().for_each(|h| *h = 0);
        for i in 0..m.n_rows() - j {
            let a = &e[i * k..(i + 1) * k];
            let b = &e[(i + j) * k..(i + j + 1) * k];
            for (&x, &y) in a.iter().zip(b) {
                hist[(x as usize + p - y as usize) % p] += 1;
            }
        }
        if !ring.is_zero(&hist) {
            return false;
        }
    }
    true
}

/// `H H* = K I`: rows mutually orthogonal.
pub fn has_orthogonal_rows(m: &PhaseMatrix) -> bool {
    let p = m.p() as usize;
    let ring = CyclotomicRing::get(m.p());
    let mut hist = vec![0i64; p];
    for a in 0..m.n_rows() {
        for b in a + 1..m.n_rows() {
            hist.iter_mut().for_each(|h| *h = 0);
            for (&x, &y) in m.row(a).iter().zip(m.row(b)) {
                hist[(x as usize + p - y as usize) % p] += 1;
            }
            if !ring.is_zero(&hist) {
                return false;
            }
        }
    }
    true
}

/// Integer Gramian `A Aᵀ`.
pub fn ternary_gramian(a: &TernaryMatrix) -> Square<i64> {
    integer_product(a, a)
}

/// `X Yᵀ` for two equally shaped ternary matrices.
pub fn integer_product(x: &TernaryMatrix, y: &TernaryMatrix) -> Square<i64> {
    let n = x.n_rows();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    x.row(i)
                        .iter()
                        .zip(y.row(j))
                        .map(|(&u, &v)| u as i64 * v as i64)
                        .sum()
                })
                .collect()
        })
        .collect();
    Square::from_rows(rows).expect("product is square")
}

/// Ternary CCM: the integer row Gramian is diagonally regular.
pub fn ternary_is_ccm(a: &TernaryMatrix) -> bool {
    let k = a.n_cols();
    let e = a.entries();
    (1..a.n_rows()).all(|j| {
        let mut s = 0i64;
        for i in 0..a.n_rows() - j {
            for c in 0..k {
                s += (e[i * k + c] * e[(i + j) * k + c]) as i64;
            }
        }
        s == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(text: &str) -> PhaseMatrix {
        PhaseMatrix::parse_quad(text).unwrap()
    }

    #[test]
    fn three_term_worked_example() {
        // x = (-1, -1, -i)
        let x = PhaseCode::new(4, vec![2, 2, 3]).unwrap();
        let g = |j| autocorrelation(&x, j).unwrap().as_gaussian().unwrap();
        // conjugate on the later factor; the conj-first convention mirrors lags
        assert_eq!(g(2), (0, -1));
        assert_eq!(g(1), (1, -1));
        assert_eq!(g(0), (3, 0));
        assert_eq!(g(-1), (1, 1));
        assert_eq!(g(-2), (0, 1));
        assert!(autocorrelation(&x, 3).is_err());
    }

    #[test]
    fn all_ones_code() {
        let x = PhaseCode::new(3, vec![0; 6]).unwrap();
        for j in 0..6 {
            assert_eq!(autocorrelation(&x, j).unwrap().as_integer(), Some(6 - j as i64));
        }
    }

    #[test]
    fn gramian_of_three_row_binary_matrix() {
        let m = quad("[[1,1,1,1],[1,-1,-1,-1],[1,1,-1,-1]]");
        let g = row_gramian(&m);
        let ints: Vec<i64> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| g.get(i, j).as_integer().unwrap())
            .collect();
        assert_eq!(ints, vec![4, -2, 0, -2, 4, 2, 0, 2, 4]);
        assert!(g.is_diagonally_regular());
        assert!(is_ccm(&m));
    }

    #[test]
    fn row_correlation_of_printed_rows() {
        // rows (-1,-1,-i), (-i,-i,1), (-1,-1,1); the printed termwise vectors
        // sum to these scalars.
        let m = quad("[[-1,-1,-i],[-i,-i,1],[-1,-1,1]]");
        let g = |j| row_correlation(&m, j).unwrap().as_gaussian().unwrap();
        assert_eq!(g(0), (9, 0));
        assert_eq!(g(1), (1, -1)); // -3i + (1 + 2i)
        assert_eq!(g(2), (2, -1));
        assert_eq!(g(-1), (1, 1));
        assert_eq!(g(-2), (2, 1));
    }

    #[test]
    fn small_ccm_verdicts() {
        assert!(is_ccm(&quad("[[1,1],[1,-1]]")));
        assert!(!is_ccm(&quad("[[1,1],[1,1]]")));
        assert!(is_ccm(&quad("[[1,1,1]]")));
        let q = Square::from_rows(vec![
            vec![CycSum::integer(4, 4), CycSum::integer(4, 1)],
            vec![CycSum::integer(4, 1), CycSum::integer(4, 4)],
        ])
        .unwrap();
        assert!(!q.is_diagonally_regular());
    }

    #[test]
    fn ternary_zero_matrix_is_ccm() {
        assert!(ternary_is_ccm(&TernaryMatrix::zeros(3, 2).unwrap()));
        let a = TernaryMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
        assert!(!ternary_is_ccm(&a));
    }
}
