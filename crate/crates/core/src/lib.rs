//! Distances between permutations that share a peak set.
//!
//! A permutation `σ` of `{1, ..., n}` has a peak at position `i` when
//! `σ(i-1) < σ(i) > σ(i+1)`. The permutations with a given peak set `S` form
//! the class `P(S;n)`. This crate computes Hamming, ℓ∞ and Kendall-Tau
//! distances, builds explicit pairs realising the extreme distances inside
//! each class, and checks the closed forms for those extremes against
//! exhaustive search.

pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod metrics;
pub mod peaks;
pub mod perm;
pub mod verify;

pub use constructions::{
    e_of, e_star_of, max_hamming_pair, max_kendall_pair, max_linf_pair, max_pair, min_pair,
    ExtremalPair,
};
pub use enumerate::{
    class_size, distance_summary, enumerate_sn, partition_check, peak_class, ClassSize,
    DistanceSummary, Limits, PeakClass,
};
pub use error::{Error, Result};
pub use metrics::{
    hamming, kendall_tau, kendall_tau_fast, linf, minimal_swap_path, MetricKind, SwapPath,
};
pub use peaks::{checked_value_swap, is_admissible, peak_set, PeakSet};
pub use perm::{AdjacentValueSwap, Permutation};
