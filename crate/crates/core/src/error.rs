use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field of size {q}^{k} exceeds the enumeration cap {cap}")]
    CapExceeded { q: u64, k: u32, cap: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over F_{0}")]
    NotIrreducible(u64),
    #[error("quadratic character is not defined in characteristic 2")]
    CharacteristicTwo,
    #[error("bad reduction at {q} ({kind:?})")]
    BadReduction { q: u64, kind: BadKind },
    #[error("Weil cubic at q = {q} has no root in K")]
    NotGl2Compatible { q: u64 },
    #[error("(q^3 + 1 - N) is not divisible by 3 at q = {q}")]
    Integrality { q: u64 },
    #[error("L-polynomial at q = {q} violates the Weil bounds")]
    LPolyInconsistent { q: u64 },
    #[error("defining polynomial is not squarefree modulo {p}")]
    IndexDivisor { p: u64 },
    #[error("a coordinate denominator is divisible by {p}")]
    DenominatorDivisible { p: u64 },
    #[error("no embedding of K into the Hecke field is available")]
    EmbeddingUnavailable,
    #[error("record {label} has no eigenvalue at q = {q}")]
    MissingEigenvalue { label: String, q: u64 },
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("solution is not normalized to a = 0 mod 2, b = 1 mod 4")]
    Normalization,
    #[error("unsupported twist: {0}")]
    UnsupportedDelta(String),
    #[error("polynomial is not monic with integer coefficients")]
    NonMonic,
    #[error("ambiguous twist pairing for {label}: more eigenvalues needed")]
    Ambiguous { label: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BadKind {
    /// Multiplicative; the trace is +-(N(q)+1) up to the unknown sign.
    Multiplicative,
    /// Residue characteristic in the excluded set {2, 7}, or a genuinely singular model.
    Excluded,
}

pub type Result<T> = core::result::Result<T, Error>;
