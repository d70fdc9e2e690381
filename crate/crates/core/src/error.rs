use thiserror::Error;

/// Errors raised by the group, scheme, algebra and character pipelines.
///
/// Disagreement variants signal that two independent routes to the same
/// quantity produced different answers; they are never expected on valid
/// input and indicate a defect.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters (n = {n}, s = {s}): {reason}")]
    InvalidParams { n: u64, s: u64, reason: String },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("{what}: route disagreement ({detail})")]
    RouteDisagreement { what: &'static str, detail: String },

    #[error("association scheme axiom violated: {0}")]
    SchemeAxiom(String),

    #[error("modulus mismatch: basis is over F_{expected}, vector is over F_{found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("vector length {found} does not match basis length {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{0} is not a prime modulus")]
    NotPrime(u64),

    #[error("closure did not saturate within {0} rounds")]
    RoundBudgetExceeded(usize),

    #[error("ranks disagree across primes: {0}")]
    PrimeDisagreement(String),

    #[error("group of order {order} exceeds the limit {limit} for {what}")]
    SizeGuard { what: &'static str, order: usize, limit: usize },

    #[error("non-integral multiplicity for {label}: {value}")]
    NonIntegral { label: String, value: String },

    #[error("character table check failed: {0}")]
    CharacterCheck(String),

    #[error("Wedderburn decomposition check failed: {0}")]
    Wedderburn(String),
}

pub type Result<T> = std::result::Result<T, Error>;
