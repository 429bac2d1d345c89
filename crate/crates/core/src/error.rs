use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial is not a valid input to {0}")]
    ZeroPolynomial(&'static str),

    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(usize, usize),

    #[error("congruence entry {index}: residue degree {residue_degree} is not below modulus degree {modulus_degree}")]
    ResidueTooLarge { index: usize, residue_degree: usize, modulus_degree: usize },

    #[error("trailing coefficient of the modulus product is {0}, not a unit")]
    NonUnitTrailing(String),

    #[error("correction degree {0} is too small to make the solution integral")]
    CorrectionTooSmall(usize),

    #[error("bases {0} and {1} have resultant {2}, not +-1")]
    ResultantNotUnit(usize, usize, String),

    #[error("candidate search exhausted at degree cap {0}")]
    SearchExhausted(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exponent {n} must exceed L(f') = {bound}")]
    TailExponentTooSmall { n: usize, bound: String },

    #[error("no square-free tail x^n + f found for n <= {0}")]
    TailExhausted(usize),

    #[error("budget {0} exceeds the enumeration guard (max 2)")]
    BudgetTooLarge(usize),

    #[error("enumeration size {0} exceeds the guard {1}")]
    TooLarge(String, String),

    #[error("no irreducible polynomial within distance 3 of {0}")]
    NoNearbyIrreducible(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("Phi(r) <= 2.5 r fails at r = {0}")]
    PhiBoundViolated(u64),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
