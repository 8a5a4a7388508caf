use thiserror::Error;

/// Errors produced by the ccm library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CcmError {
    #[error("lag {lag} outside the range -{max}..={max}")]
    LagOutOfRange { lag: isize, max: usize },

    #[error("modulus {0} unsupported (expected 1..=36)")]
    InvalidModulus(u32),

    #[error("exponent {exp} is not below the modulus {p}")]
    InvalidExponent { exp: u32, p: u32 },

    #[error("ternary entry {0} is not one of -1, 0, 1")]
    InvalidTernary(i64),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("{op} requires modulus 4, got {p}")]
    RequiresQuadPhase { op: &'static str, p: u32 },

    #[error("feasibility guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("not a dual pair: |A| + |B| != 1 at ({row}, {col})")]
    NotDualPair { row: usize, col: usize },

    #[error("commutator B A^T - A B^T is not diagonally regular")]
    CommutatorNotRegular,

    #[error("operand {0} is not a ternary CCM")]
    NotTernaryCcm(&'static str),

    #[error("construction produced a non-CCM: {0}")]
    TheoremViolation(String),

    #[error("factor pool has no {n}x{k} classes")]
    MissingPool { n: usize, k: usize },

    #[error("orbit enumerations disagree: normal forms gave {normal_forms}, closure gave {closure}")]
    OrbitMismatch { normal_forms: usize, closure: usize },
}

impl CcmError {
    /// Process exit status for command-line use: 1 when the mathematics says
    /// no (a non-CCM, a failed theorem hypothesis), 2 when the input itself
    /// is unusable.
    pub fn exit_code(&self) -> u8 {
        match self {
            CcmError::NotDualPair { .. }
            | CcmError::CommutatorNotRegular
            | CcmError::NotTernaryCcm(_)
            | CcmError::TheoremViolation(_)
            | CcmError::MissingPool { .. }
            | CcmError::OrbitMismatch { .. } => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for CcmError {
    fn from(e: std::io::Error) -> Self {
        CcmError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CcmError>;
