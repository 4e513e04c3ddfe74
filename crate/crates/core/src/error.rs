use thiserror::Error;

use crate::peaks::PeakSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("could not parse token {position} ({token:?}) as a positive integer")]
    Parse { position: usize, token: String },

    #[error("permutation length {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    #[error("size mismatch: {left} != {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("value swap ({value}, {}) is out of range for n = {n}", value + 1)]
    SwapOutOfRange { value: u32, n: usize },

    /// Values `value` and `value + 1` sit in adjacent positions, so the swap
    /// is not guaranteed to preserve the peak set.
    #[error("values {value} and {} are positionally adjacent; swap may change the peak set", value + 1)]
    SwapRejected { value: u32 },

    #[error("peak set {set} is not admissible for n = {n}")]
    InadmissibleSet { set: PeakSet, n: usize },

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("peak class has {size} member(s); at least two are needed for a distance")]
    ClassTooSmall { size: usize },

    #[error("|P({set};{n})| = {size} is not divisible by 2^{exponent}")]
    DivisibilityViolation {
        set: PeakSet,
        n: usize,
        size: u64,
        exponent: u32,
    },
}
