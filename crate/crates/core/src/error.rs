use thiserror::Error;

/// Errors raised by the arithmetic core, the polynomial types and the engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NttError {
    #[error("modulus out of range: q = {q} (supported: 2 <= q < 2^31)")]
    ModulusOutOfRange { q: u64 },

    #[error("composite modulus: q = {q} is not prime")]
    CompositeModulus { q: u64 },

    #[error("ring degree must be a power of two >= 2, got n = {n}")]
    NotPowerOfTwo { n: u64 },

    #[error(
        "no primitive 2n-th root of unity: 2n = {two_n} does not divide q - 1 = {q_minus_one}"
    )]
    NoRootOfUnity { two_n: u64, q_minus_one: u64 },

    #[error("zero has no multiplicative inverse")]
    NoInverse,

    #[error("operands live in different rings")]
    ParamsMismatch,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coefficient {value} at index {index} is not reduced modulo q = {q}")]
    CoefficientOutOfRange { index: usize, value: u64, q: u32 },

    #[error("invalid polynomial file: {0}")]
    PolyFormat(String),
}

pub type Result<T, E = NttError> = std::result::Result<T, E>;
