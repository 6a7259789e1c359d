use thiserror::Error;

/// Errors raised by the arithmetic kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not a unit modulo {p}")]
    UnitRequired { value: String, p: u64 },

    #[error("requested precision {requested} exceeds achievable precision {achievable}")]
    PrecisionUnderflow { requested: u32, achievable: u32 },

    #[error(
        "division by an element of valuation {divisor_valuation} that does not divide the dividend"
    )]
    NotDivisible { divisor_valuation: u32 },

    #[error("value has a denominator divisible by {p}")]
    NonIntegral { p: u64 },

    #[error("level {level} is not of the form N*{p}^{r} with gcd(N, {p}) = 1")]
    Level { level: u64, p: u64, r: u32 },

    #[error("level {found} does not divide the embedding level {expected}")]
    LevelMismatch { expected: u64, found: u64 },

    #[error("sigma_{j} is not an automorphism of Q(zeta_{level})")]
    InvalidAutomorphism { j: i64, level: u64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("character {label} is not primitive (conductor {conductor})")]
    NotPrimitive { label: String, conductor: u64 },

    #[error("character {label} has the wrong parity for {context}")]
    Parity { label: String, context: String },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision budget infeasible: requested {requested} digits with degree {degree}, needs working precision {required}")]
    Budget {
        requested: u32,
        degree: usize,
        required: u32,
    },

    #[error("truncation at degree {degree} bounds the precision by {achievable}, below the requested {requested}")]
    TailBound {
        requested: u32,
        degree: usize,
        achievable: u32,
    },

    #[error("value is zero at working precision {precision}; raise the precision")]
    Undetermined { precision: u32 },

    #[error("invalid character label {0:?}")]
    Label(String),

    #[error("{0} is not a prime >= 5")]
    InvalidPrime(u64),

    #[error("unramified extension of degree {f} over Q_{p} is outside the supported search range")]
    ExtensionTooLarge { p: u64, f: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
