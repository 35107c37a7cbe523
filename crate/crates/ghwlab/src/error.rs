use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("field of order {needed} exceeds the table bound {bound}")]
    TableBound { needed: u128, bound: u64 },
    #[error("mid field of order {0} exceeds the subfield table limit")]
    SubfieldBound(u64),
    #[error("extension degrees must be positive")]
    ZeroDegree,
    #[error("no alternative field construction exists")]
    NoAlternative,
    #[error("discrete log of zero is undefined")]
    ZeroLog,
}

#[derive(Debug, Error)]
pub enum CyclotomyError {
    #[error("{divisor} does not divide the group order {order}")]
    NotADivisor { divisor: u64, order: u64 },
    #[error("class index {index} out of range for {count} classes")]
    ClassIndexOutOfRange { index: u64, count: u64 },
    #[error("quadratic character is undefined in characteristic 2")]
    EvenCharacteristic,
    #[error("the quadratic sum over this field is irrational")]
    Irrational,
    #[error("minimal polynomial coefficient fell outside the mid field")]
    CoefficientOutsideSubfield,
}

#[derive(Debug, Error)]
pub enum GhwError {
    #[error("enumeration would need {needed} subspaces, over the cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("rank {r} out of range 1..={k}")]
    RankOutOfRange { r: usize, k: usize },
    #[error("period-sum count came out non-integer (internal inconsistency)")]
    NonIntegerCount,
    #[error("closed form does not apply: {0}")]
    HypothesisNotMet(String),
    #[error("variable change is singular (upstream assumption violated)")]
    SingularTransform,
    #[error("intersection length {l} out of range 0..={m}")]
    LengthOutOfRange { l: u32, m: u32 },
}
