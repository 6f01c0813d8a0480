use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator is not invertible")]
    Singular,
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("quotient is not isomorphic to Z/{0} x Z/{1}")]
    ShapeMismatch(u32, u32),
    #[error("map is not a surjective homomorphism")]
    NotSurjective,
    #[error("cocycle identity fails at ({0}, {1}, {2})")]
    CocycleViolation(usize, usize, usize),
    #[error("not a primitive {0}-th root of unity")]
    NotPrimitiveRoot(u32),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("element is not central")]
    NotCentral,
    #[error("pairing is not negative definite on the chosen curves")]
    NotNegativeDefinite,
    #[error("configuration is disconnected")]
    Disconnected,
    #[error("curve {0} has no self-intersection")]
    MissingSelfIntersection(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("curve {0} fits no exceptional curve type")]
    Unclassifiable(String),
    #[error("curve type {0} is outside the counting rule")]
    UnsupportedCurveType(String),
    #[error("group is not contained in SL2")]
    NotSpecialLinear,
    #[error("character table construction failed: {0}")]
    CharacterTable(String),
    #[error("degree cap {0} too small, need at least {1}")]
    DegreeCapTooSmall(u32, u32),
    #[error("cover structure check failed: {0}")]
    CoverCheck(String),
    #[error("unknown {0}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
