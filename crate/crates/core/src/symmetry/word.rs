//! Words in the five generator families and the rewrite relations that bring
//! any word to the normal form `S · P · C · ρ · Q`.

use super::element::{invert_permutation, SymmetryElement};
use crate::algebra::PhaseMatrix;

/// A single generator factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `S`: conjugate the whole matrix.
    Conj,
    /// `P_σ`: new column `k` is old column `σ[k]`.
    Perm(Vec<usize>),
    /// `C_U`: multiply column `k` by `ω^{U[k]}`.
    Mult(Vec<u8>),
    /// `ρ_T`: conjugate-reverse the columns with `T[k]` set.
    Rev(Vec<bool>),
    /// `Q(β)`: multiply row `n` (1-based) by `β^n`, `β = ω^b`.
    Prog(u8),
}

impl Generator {
    /// Position in the normal form `S P C ρ Q`.
    pub fn rank(&self) -> u8 {
        match self {
            Generator::Conj => 0,
            Generator::Perm(_) => 1,
            Generator::Mult(_) => 2,
            Generator::Rev(_) => 3,
            Generator::Prog(_) => 4,
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            Generator::Conj => false,
            Generator::Perm(s) => s.iter().enumerate().all(|(i, &x)| i == x),
            Generator::Mult(u) => u.iter().all(|&x| x == 0),
            Generator::Rev(t) => t.iter().all(|&x| !x),
            Generator::Prog(b) => *b == 0,
        }
    }

    /// Apply this single factor to a matrix.
    pub fn apply(&self, m: &PhaseMatrix) -> PhaseMatrix {
        let (n, k) = m.shape();
        let mut g = SymmetryElement::identity(m.p(), n, k);
        match self {
            Generator::Conj => g.conj = true,
            Generator::Perm(s) => g.perm = s.clone(),
            Generator::Mult(u) => g.col_mult = u.clone(),
            Generator::Rev(t) => g.rev_mask = t.clone(),
            Generator::Prog(b) => g.prog = *b,
        }
        g.apply(m).expect("generator shape matches matrix")
    }
}

fn neg(p: u32, e: u8) -> u8 {
    ((p - e as u32 % p) % p) as u8
}

fn add(p: u32, a: u8, b: u8) -> u8 {
    ((a as u32 + b as u32) % p) as u8
}

/// `Ū`: conjugate every multiplier.
pub fn conj_mult(p: u32, u: &[u8]) -> Vec<u8> {
    u.iter().map(|&x| neg(p, x)).collect()
}

/// `U_P`, chosen so that `C_U P_σ = P_σ C_{U_P}`: entry `j` is `U[σ⁻¹(j)]`.
pub fn permuted_mult(u: &[u8], perm: &[usize]) -> Vec<u8> {
    invert_permutation(perm).iter().map(|&i| u[i]).collect()
}

/// `T_{P⁻¹}`: entry `j` is `T[σ⁻¹(j)]`.
pub fn permuted_mask(t: &[bool], perm: &[usize]) -> Vec<bool> {
    invert_permutation(perm).iter().map(|&i| t[i]).collect()
}

/// `U_T`: conjugate the multipliers whose column is reversed.
pub fn rev_twisted_mult(p: u32, u: &[u8], t: &[bool]) -> Vec<u8> {
    u.iter().zip(t).map(|(&x, &r)| if r { neg(p, x) } else { x }).collect()
}

/// `U_{T,β}`: `β^{N+1}` on reversed columns, `1` elsewhere.
pub fn prog_reversal_mult(p: u32, n_rows: usize, t: &[bool], b: u8) -> Vec<u8> {
    let shift = ((b as usize * (n_rows + 1)) % p as usize) as u8;
    t.iter().map(|&r| if r { shift } else { 0 }).collect()
}

/// A product of generators; the rightmost factor acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn new(factors: Vec<Generator>) -> Self {
        Word(factors)
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn into_factors(self) -> Vec<Generator> {
        self.0
    }

    pub fn apply(&self, m: &PhaseMatrix) -> PhaseMatrix {
        self.0.iter().rev().fold(m.clone(), |acc, g| g.apply(&acc))
    }

    /// Rewrite to `S P C ρ Q` order using the commutation relations and the
    /// in-family products, then read off the element.
    pub fn normal_form(&self, p: u32, n_rows: usize, n_cols: usize) -> SymmetryElement {
        let mut w: Vec<Generator> = self.0.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut i = 0;
        while i + 1 < w.len() {
            let (a, b) = (&w[i], &w[i + 1]);
            if a.rank() < b.rank() {
                i += 1;
                continue;
            }
            let replacement = if a.rank() == b.rank() {
                merge(p, a, b)
            } else {
                commute(p, n_rows, a, b)
            };
            let replacement: Vec<Generator> = replacement.into_iter().filter(|g| !g.is_identity()).collect();
            w.splice(i..i + 2, replacement);
            i = i.saturating_sub(1);
        }

        let mut g = SymmetryElement::identity(p, n_rows, n_cols);
        for f in w {
            match f {
                Generator::Conj => g.conj = true,
                Generator::Perm(s) => g.perm = s,
                Generator::Mult(u) => g.col_mult = u,
                Generator::Rev(t) => g.rev_mask = t,
                Generator::Prog(b) => g.prog = b,
            }
        }
        g
    }
}

/// Product of two factors from the same family.
fn merge(p: u32, a: &Generator, b: &Generator) -> Vec<Generator> {
    use Generator::*;
    match (a, b) {
        (Conj, Conj) => vec![],
        // P_σ P_τ: column k reads old column τ[σ[k]]
        (Perm(s), Perm(t)) => vec![Perm(s.iter().map(|&k| t[k]).collect())],
        (Mult(u), Mult(v)) => vec![Mult(u.iter().zip(v).map(|(&x, &y)| add(p, x, y)).collect())],
        (Rev(s), Rev(t)) => vec![Rev(s.iter().zip(t).map(|(&x, &y)| x ^ y).collect())],
        (Prog(x), Prog(y)) => vec![Prog(add(p, *x, *y))],
        _ => unreachable!("merge called on different families"),
    }
}

/// Rewrite an out-of-order pair `a b` (rank(a) > rank(b)).
fn commute(p: u32, n_rows: usize, a: &Generator, b: &Generator) -> Vec<Generator> {
    use Generator::*;
    match (a, b) {
        // (viii) S P = P S
        (Perm(s), Conj) => vec![Conj, Perm(s.clone())],
        // (ii) C_U S = S C_Ū
        (Mult(u), Conj) => vec![Conj, Mult(conj_mult(p, u))],
        // (iv) C_U P = P C_{U_P}
        (Mult(u), Perm(s)) => vec![Perm(s.clone()), Mult(permuted_mult(u, s))],
        // (v) ρ_T S = S ρ_T
        (Rev(t), Conj) => vec![Conj, Rev(t.clone())],
        // (vi) ρ_T P = P ρ_{T_{P⁻¹}}
        (Rev(t), Perm(s)) => vec![Perm(s.clone()), Rev(permuted_mask(t, s))],
        // (i) read right to left: ρ_T C_V = C_{V_T} ρ_T
        (Rev(t), Mult(v)) => vec![Mult(rev_twisted_mult(p, v, t)), Rev(t.clone())],
        // (vii) S Q(β) = Q(β̄) S, so Q(β) S = S Q(β̄)
        (Prog(x), Conj) => vec![Conj, Prog(neg(p, *x))],
        // (x) Q P = P Q
        (Prog(x), Perm(s)) => vec![Perm(s.clone()), Prog(*x)],
        // (iii) C Q = Q C
        (Prog(x), Mult(u)) => vec![Mult(u.clone()), Prog(*x)],
        // (ix) Q(β) ρ_T = C_{U_{T,β}} ρ_T Q(β)
        (Prog(x), Rev(t)) => vec![
            Mult(prog_reversal_mult(p, n_rows, t, *x)),
            Rev(t.clone()),
            Prog(*x),
        ],
        _ => unreachable!("commute called on an ordered pair"),
    }
}

/// The ten commutation relations between generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `C_U ρ_T = ρ_T C_{U_T}`
    MultRev,
    /// `C_U S = S C_Ū`
    MultConj,
    /// `C_U Q(β) = Q(β) C_U`
    MultProg,
    /// `C_U P = P C_{U_P}`
    MultPerm,
    /// `ρ_T S = S ρ_T`
    RevConj,
    /// `ρ_T P = P ρ_{T_{P⁻¹}}`
    RevPerm,
    /// `S Q(β) = Q(β̄) S`
    ConjProg,
    /// `S P = P S`
    ConjPerm,
    /// `Q(β) ρ_T = C_{U_{T,β}} ρ_T Q(β)`
    ProgRev,
    /// `Q(β) P = P Q(β)`
    ProgPerm,
}

/// Concrete values substituted into a relation.
#[derive(Clone, Debug)]
pub struct RelationParams {
    pub mult: Vec<u8>,
    pub mask: Vec<bool>,
    pub perm: Vec<usize>,
    pub prog: u8,
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::MultRev,
        Relation::MultConj,
        Relation::MultProg,
        Relation::MultPerm,
        Relation::RevConj,
        Relation::RevPerm,
        Relation::ConjProg,
        Relation::ConjPerm,
        Relation::ProgRev,
        Relation::ProgPerm,
    ];

    /// Left and right operator strings of the relation.
    pub fn sides(&self, p: u32, n_rows: usize, a: &RelationParams) -> (Word, Word) {
        use Generator::*;
        let u = || Mult(a.mult.clone());
        let t = || Rev(a.mask.clone());
        let s = || Perm(a.perm.clone());
        let q = || Prog(a.prog);
        let (lhs, rhs) = match self {
            Relation::MultRev => (vec![u(), t()], vec![t(), Mult(rev_twisted_mult(p, &a.mult, &a.mask))]),
            Relation::MultConj => (vec![u(), Conj], vec![Conj, Mult(conj_mult(p, &a.mult))]),
            Relation::MultProg => (vec![u(), q()], vec![q(), u()]),
            Relation::MultPerm => (vec![u(), s()], vec![s(), Mult(permuted_mult(&a.mult, &a.perm))]),
            Relation::RevConj => (vec![t(), Conj], vec![Conj, t()]),
            Relation::RevPerm => (vec![t(), s()], vec![s(), Rev(permuted_mask(&a.mask, &a.perm))]),
            Relation::ConjProg => (vec![Conj, q()], vec![Prog(neg(p, a.prog)), Conj]),
            Relation::ConjPerm => (vec![Conj, s()], vec![s(), Conj]),
            Relation::ProgRev => (
                vec![q(), t()],
                vec![Mult(prog_reversal_mult(p, n_rows, &a.mask, a.prog)), t(), q()],
            ),
            Relation::ProgPerm => (vec![q(), s()], vec![s(), q()]),
        };
        (Word(lhs), Word(rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m44() -> PhaseMatrix {
        PhaseMatrix::parse_quad("[[-1,-1,-i,-1],[-i,-i,1,1],[-1,-1,1,1],[i,-i,-1,-i]]").unwrap()
    }

    #[test]
    fn mult_then_rev_rewrites_to_rev_then_twisted_mult() {
        let u = vec![1, 2, 3, 0];
        let t = vec![true, false, true, false];
        let direct = Word::new(vec![Generator::Mult(u.clone()), Generator::Rev(t.clone())]).normal_form(4, 4, 4);
        let other = Word::new(vec![Generator::Rev(t.clone()), Generator::Mult(rev_twisted_mult(4, &u, &t))])
            .normal_form(4, 4, 4);
        assert_eq!(direct, other);
        assert_eq!(direct.col_mult(), &u[..]);
    }

    #[test]
    fn conj_moves_past_prog_by_conjugating_beta() {
        let w = Word::new(vec![Generator::Prog(1), Generator::Conj]);
        let g = w.normal_form(4, 4, 4);
        assert!(g.conj());
        assert_eq!(g.prog(), 3);
    }

    #[test]
    fn prog_past_rev_introduces_column_multiplier() {
        // β = i, N = 4: β^{N+1} = i^5 = i on reversed columns
        let t = vec![false, true, false, true];
        let g = Word::new(vec![Generator::Prog(1), Generator::Rev(t.clone())]).normal_form(4, 4, 4);
        assert_eq!(g.col_mult(), &[0, 1, 0, 1]);
        assert_eq!(g.rev_mask(), &t[..]);
        assert_eq!(g.prog(), 1);
    }

    #[test]
    fn every_relation_holds_on_a_fixed_instance() {
        let params = RelationParams {
            mult: vec![1, 3, 2, 0],
            mask: vec![true, true, false, true],
            perm: vec![2, 0, 3, 1],
            prog: 3,
        };
        let m = m44();
        for rel in Relation::ALL {
            let (l, r) = rel.sides(4, 4, &params);
            assert_eq!(l.apply(&m), r.apply(&m), "{rel:?}");
        }
    }
}
