use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TcError {
    #[error("invalid threshold parameters: {0}")]
    InvalidParams(String),
    #[error("weight sum {got} does not match configured unit count {expected}")]
    WeightSumMismatch { expected: u64, got: u64 },
    #[error("secret {0} is not an element of the order-q scalar field")]
    SecretOutOfField(u64),
    #[error("insufficient distinct unit shares: need {needed}, got {got}")]
    InsufficientShares { needed: u64, got: u64 },
    #[error("malformed key material: {0}")]
    MalformedKeyMaterial(String),
}
