use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid conductor {0}: must satisfy m > 1 and m != 2 (mod 4)")]
    InvalidConductor(u64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("{s} is not a unit modulo {m}")]
    NotAUnit { s: i64, m: u64 },
    #[error("{d} does not divide {m}")]
    NotADivisor { d: u64, m: u64 },
    #[error("argument {b} out of range (0, {m})")]
    OutOfRange { b: i64, m: u64 },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("vector is not in the span of the basis")]
    NotInSpan,
    #[error("the two bases span different spaces")]
    SpansDiffer,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {ell} ramifies in the {m}-th cyclotomic field")]
    Ramified { ell: u64, m: u64 },
    #[error("character value at zero")]
    ZeroArgument,
    #[error("Jacobi sum J({b}, {c}) is undefined modulo {m}")]
    JacobiUndefined { b: i64, c: i64, m: u64 },
    #[error("residue field of size {q} exceeds the limit {limit}")]
    FieldTooLarge { q: u128, limit: u64 },
    #[error("trivial character has no B_1 in this setting")]
    TrivialCharacter,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
