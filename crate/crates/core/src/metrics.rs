//! Hamming, ℓ∞ and Kendall-Tau distances between permutations of equal size.
//!
//! Kendall-Tau has three independent routes that must agree:
//! [`kendall_tau`] counts deranged pairs directly in O(n²),
//! [`kendall_tau_fast`] counts inversions of `b ∘ a⁻¹` by merge sort, and
//! [`minimal_swap_path`] builds an explicit shortest sequence of adjacent value
//! swaps from `a` to `b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::perm::{check_same_size, AdjacentValueSwap, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Hamming,
    Linf,
    #[serde(rename = "kendall")]
    KendallTau,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::Hamming,
        MetricKind::Linf,
        MetricKind::KendallTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Hamming => "hamming",
            MetricKind::Linf => "linf",
            MetricKind::KendallTau => "kendall",
        }
    }

    pub fn distance(self, a: &Permutation, b: &Permutation) -> Result<u64> {
        match self {
            MetricKind::Hamming => hamming(a, b),
            MetricKind::Linf => linf(a, b),
            MetricKind::KendallTau => kendall_tau_fast(a, b),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hamming" => Ok(MetricKind::Hamming),
            "linf" => Ok(MetricKind::Linf),
            "kendall" => Ok(MetricKind::KendallTau),
            other => Err(format!(
                "unknown metric {other:?} (expected hamming, linf or kendall)"
            )),
        }
    }
}

pub fn hamming(a: &Permutation, b: &Permutation) -> Result<u64> {
    check_same_size(a, b)?;
    Ok(hamming_slice(a.values(), b.values()))
}

pub fn linf(a: &Permutation, b: &Permutation) -> Result<u64> {
    check_same_size(a, b)?;
    Ok(linf_slice(a.values(), b.values()))
}

/// Number of position pairs `i < j` ordered one way by `a` and the other way
/// by `b`.
pub fn kendall_tau(a: &Permutation, b: &Permutation) -> Result<u64> {
    check_same_size(a, b)?;
    Ok(deranged_pairs_slice(a.values(), b.values()))
}

/// Same value as [`kendall_tau`], computed as the inversion number of
/// `b ∘ a⁻¹` in O(n log n).
pub fn kendall_tau_fast(a: &Permutation, b: &Permutation) -> Result<u64> {
    check_same_size(a, b)?;
    let mut kernel = FastKendall::new(a.len());
    Ok(kernel.distance(a.inverse().values(), b.values()))
}

pub(crate) fn hamming_slice(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

pub(crate) fn linf_slice(a: &[u32], b: &[u32]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .max()
        .unwrap_or(0)
}

pub(crate) fn deranged_pairs_slice(a: &[u32], b: &[u32]) -> u64 {
    let n = a.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (a[i] < a[j]) != (b[i] < b[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Reusable buffers for inversion-counting Kendall-Tau.
pub(crate) struct FastKendall {
    composite: Vec<u32>,
    scratch: Vec<u32>,
}

impl FastKendall {
    pub(crate) fn new(n: usize) -> Self {
        FastKendall {
            composite: vec![0; n],
            scratch: vec![0; n],
        }
    }

    /// `a_inverse` is the inverse of the first permutation.
    pub(crate) fn distance(&mut self, a_inverse: &[u32], b: &[u32]) -> u64 {
        for (slot, &k) in self.composite.iter_mut().zip(a_inverse) {
            *slot = b[k as usize - 1];
        }
        count_inversions(&mut self.composite, &mut self.scratch)
    }
}

/// Sorts `values` and returns its inversion count.
pub(crate) fn count_inversions(values: &mut [u32], scratch: &mut [u32]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = values.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        count_inversions(left, sl) + count_inversions(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if values[i] <= values[j] {
            scratch[k] = values[i];
            i += 1;
        } else {
            scratch[k] = values[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&values[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&values[j..n]);
    values.copy_from_slice(&scratch[..n]);
    count
}

/// A sequence of adjacent value swaps taking `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapPath {
    pub source: Permutation,
    pub target: Permutation,
    pub steps: Vec<AdjacentValueSwap>,
}

impl SwapPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the steps in order to `source`.
    pub fn replay(&self) -> Result<Permutation> {
        self.steps
            .iter()
            .try_fold(self.source.clone(), |p, &s| p.apply_value_swap(s))
    }
}

/// Comma-separated swap values, e.g. `1,4`.
impl fmt::Display for SwapPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A shortest path of adjacent value swaps from `a` to `b`.
///
/// Tracks `μ = b ∘ c⁻¹` for the current permutation `c`. Swapping values
/// `i, i+1` in `c` swaps positions `i, i+1` in `μ`, and it removes one
/// inversion exactly when `μ` has a descent at `i`. Bubble sorting `μ` with the
/// smallest descent first therefore yields `inv(μ) = d_K(a, b)` steps, in
/// application order.
pub fn minimal_swap_path(a: &Permutation, b: &Permutation) -> Result<SwapPath> {
    let mut mu = Permutation::compose(b, &a.inverse())?.into_values();
    let mut steps = Vec::new();
    let mut i = 0;
    while i + 1 < mu.len() {
        if mu[i] > mu[i + 1] {
            mu.swap(i, i + 1);
            steps.push(AdjacentValueSwap::new(i as u32 + 1));
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    Ok(SwapPath {
        source: a.clone(),
        target: b.clone(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use itertools::Itertools;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn all(n: usize) -> Vec<Permutation> {
        (1..=n as u32)
            .permutations(n)
            .map(|v| Permutation::from_one_line(v).unwrap())
            .collect()
    }

    #[test]
    fn worked_example() {
        let (sigma, rho) = (p("14325"), p("25314"));
        assert_eq!(hamming(&sigma, &rho).unwrap(), 4);
        assert_eq!(linf(&sigma, &rho).unwrap(), 1);
        assert_eq!(kendall_tau(&sigma, &rho).unwrap(), 2);
        assert_eq!(kendall_tau_fast(&sigma, &rho).unwrap(), 2);
        let path = minimal_swap_path(&sigma, &rho).unwrap();
        assert_eq!(path.to_string(), "1,4");
        assert_eq!(path.replay().unwrap(), rho);
    }

    #[test]
    fn extremes_of_identity_and_reverse() {
        for n in 2..=12 {
            let e = Permutation::identity(n);
            let r = Permutation::reverse_identity(n);
            assert_eq!(hamming(&e, &r).unwrap(), 2 * (n as u64 / 2));
            assert_eq!(linf(&e, &r).unwrap(), n as u64 - 1);
            let c2 = (n * (n - 1) / 2) as u64;
            assert_eq!(kendall_tau(&e, &r).unwrap(), c2);
            assert_eq!(kendall_tau_fast(&e, &r).unwrap(), c2);
            let mut rotated: Vec<u32> = (2..=n as u32).collect();
            rotated.push(1);
            assert_eq!(
                hamming(&e, &Permutation::from_one_line(rotated).unwrap()).unwrap(),
                n as u64
            );
            let t = Permutation::transposition(1, n).unwrap();
            assert_eq!(kendall_tau(&t, &e).unwrap(), 1);
        }
    }

    #[test]
    fn self_distance_is_zero() {
        let sigma = p("58327164");
        for m in MetricKind::ALL {
            assert_eq!(m.distance(&sigma, &sigma).unwrap(), 0);
        }
        assert!(minimal_swap_path(&sigma, &sigma).unwrap().is_empty());
    }

    #[test]
    fn size_mismatch() {
        let err = Err(Error::SizeMismatch { left: 3, right: 2 });
        assert_eq!(hamming(&p("123"), &p("12")), err);
        assert_eq!(linf(&p("123"), &p("12")), err);
        assert_eq!(kendall_tau(&p("123"), &p("12")), err);
        assert_eq!(kendall_tau_fast(&p("123"), &p("12")), err);
        assert!(minimal_swap_path(&p("123"), &p("12")).is_err());
    }

    #[test]
    fn metric_names_round_trip() {
        for m in MetricKind::ALL {
            assert_eq!(m.name().parse::<MetricKind>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert!("cayley".parse::<MetricKind>().is_err());
    }

    #[test]
    fn inversion_count_small_cases() {
        let mut scratch = [0; 5];
        assert_eq!(count_inversions(&mut [1, 2, 3], &mut scratch[..3]), 0);
        assert_eq!(count_inversions(&mut [3, 2, 1], &mut scratch[..3]), 3);
        let mut v = [2, 4, 1, 3, 5];
        assert_eq!(count_inversions(&mut v, &mut scratch), 3);
        assert_eq!(v, [1, 2, 3, 4, 5]);
    }

    #[test]
    fn right_invariance_exhaustive() {
        for n in 1..=5 {
            let perms = all(n);
            for a in &perms {
                for b in &perms {
                    let d = kendall_tau(a, b).unwrap();
                    for alpha in &perms {
                        let a2 = Permutation::compose(a, alpha).unwrap();
                        let b2 = Permutation::compose(b, alpha).unwrap();
                        assert_eq!(kendall_tau(&a2, &b2).unwrap(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn hamming_never_one() {
        for n in 1..=6 {
            let perms = all(n);
            for a in &perms {
                for b in &perms {
                    assert_ne!(hamming(a, b).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn three_kendall_routes_agree_exhaustively() {
        for n in 1..=6 {
            let perms = all(n);
            for a in &perms {
                for b in &perms {
                    let slow = kendall_tau(a, b).unwrap();
                    assert_eq!(kendall_tau_fast(a, b).unwrap(), slow);
                    let path = minimal_swap_path(a, b).unwrap();
                    assert_eq!(path.len() as u64, slow);
                    assert_eq!(&path.replay().unwrap(), b);
                }
            }
        }
    }
}
