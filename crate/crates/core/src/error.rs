use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order must be positive")]
    InvalidTruncation,
    #[error("{len} coefficients do not fit below t^{order}")]
    TooManyCoefficients { len: usize, order: usize },
    #[error("series is not divisible by t^{power}")]
    NotDivisible { power: usize },
    #[error("precision exhausted: need {needed} valid degrees, have {available}")]
    PrecisionExhausted { needed: usize, available: usize },
    #[error("series is not a unit")]
    NotInvertible,
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("cannot parse {what} `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("invalid rim: {0}")]
    InvalidRim(String),
    #[error("rims live on different quivers or have different sizes")]
    MismatchedRims,
    #[error("profile is degenerate (I == J)")]
    DegenerateProfile,
    #[error("cycle product has nonzero off-diagonal entry {0}")]
    ConstraintViolated(String),
    #[error("coefficient on edge {0} must vanish for this profile")]
    ProfileMismatch(usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("eigenline ambiguous at vertex {0}")]
    EigenlineAmbiguous(usize),
    #[error("excluded parameter: {0}")]
    ExcludedParameter(String),
    #[error("map is not integral at vertex {0}")]
    NotIntegral(usize),
    #[error("relations fail: {0}")]
    RelationsFail(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
