//! Explicit pairs inside a peak class that attain the extreme distances.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::peaks::{checked_value_swap, is_admissible, peak_set, PeakSet};
use crate::perm::{AdjacentValueSwap, Permutation};

/// Two members of `P(s;n)` together with the distance they are claimed to
/// realise under `metric`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalPair {
    pub n: usize,
    #[serde(rename = "peak_set")]
    pub s: PeakSet,
    pub metric: MetricKind,
    pub claimed_distance: u64,
    pub a: Permutation,
    pub b: Permutation,
}

impl ExtremalPair {
    /// Recomputes the peak sets and the distance from scratch.
    pub fn holds(&self) -> bool {
        peak_set(&self.a) == self.s
            && peak_set(&self.b) == self.s
            && self.metric.distance(&self.a, &self.b).ok() == Some(self.claimed_distance)
    }
}

fn require_admissible(s: &PeakSet, n: usize) -> Result<()> {
    if n == 0 || !is_admissible(s, n) {
        return Err(Error::InadmissibleSet { set: s.clone(), n });
    }
    Ok(())
}

fn require_pair(s: &PeakSet, n: usize) -> Result<()> {
    require_admissible(s, n)?;
    if n < 2 {
        return Err(Error::ClassTooSmall { size: 1 });
    }
    Ok(())
}

/// The identity with positions `k, k+1` exchanged for every `k` in `s`.
pub fn e_of(s: &PeakSet, n: usize) -> Result<Permutation> {
    require_admissible(s, n)?;
    let values = (1..=n as u32)
        .map(|i| {
            if s.contains(i) {
                i + 1
            } else if i >= 2 && s.contains(i - 1) {
                i - 1
            } else {
                i
            }
        })
        .collect();
    Ok(Permutation::from_vec_unchecked(values))
}

/// The reversed identity with positions `k-1, k` exchanged for every `k` in `s`.
pub fn e_star_of(s: &PeakSet, n: usize) -> Result<Permutation> {
    require_admissible(s, n)?;
    let top = n as u32 + 1;
    let values = (1..=n as u32)
        .map(|i| {
            if s.contains(i) {
                top - i + 1
            } else if s.contains(i + 1) {
                top - i - 1
            } else {
                top - i
            }
        })
        .collect();
    Ok(Permutation::from_vec_unchecked(values))
}

/// `e[s]` and a copy with values 1 and 2 swapped; distances (2, 1, 1) under
/// (Hamming, ℓ∞, Kendall-Tau), returned in [`MetricKind::ALL`] order.
pub fn min_pair(s: &PeakSet, n: usize) -> Result<[ExtremalPair; 3]> {
    require_pair(s, n)?;
    let a = e_of(s, n)?;
    let b = checked_value_swap(&a, 1)?;
    Ok(MetricKind::ALL.map(|metric| ExtremalPair {
        n,
        s: s.clone(),
        metric,
        claimed_distance: if metric == MetricKind::Hamming { 2 } else { 1 },
        a: a.clone(),
        b: b.clone(),
    }))
}

pub fn max_kendall_claim(s: &PeakSet, n: usize) -> u64 {
    (n * (n - 1) / 2 - 2 * s.len()) as u64
}

pub fn max_linf_claim(s: &PeakSet, n: usize) -> u64 {
    if n >= 3 && s.contains(2) && s.contains(n as u32 - 1) {
        n as u64 - 2
    } else {
        n as u64 - 1
    }
}

/// `n` for `n >= 4`; below that only `P(∅;2)`, `P(∅;3)` and `P({2};3)` exist,
/// with maxima 2, 3 and 2.
pub fn max_hamming_claim(s: &PeakSet, n: usize) -> u64 {
    if n == 3 && !s.is_empty() {
        2
    } else {
        n as u64
    }
}

pub fn max_kendall_pair(s: &PeakSet, n: usize) -> Result<ExtremalPair> {
    require_pair(s, n)?;
    Ok(ExtremalPair {
        n,
        s: s.clone(),
        metric: MetricKind::KendallTau,
        claimed_distance: max_kendall_claim(s, n),
        a: e_of(s, n)?,
        b: e_star_of(s, n)?,
    })
}

pub fn max_linf_pair(s: &PeakSet, n: usize) -> Result<ExtremalPair> {
    require_pair(s, n)?;
    Ok(ExtremalPair {
        n,
        s: s.clone(),
        metric: MetricKind::Linf,
        claimed_distance: max_linf_claim(s, n),
        a: e_of(s, n)?,
        b: e_star_of(s, n)?,
    })
}

/// Pairs at Hamming distance 4 in `S_4`, keyed by peak set.
const BASE_4: [(&[u32], [u32; 4], [u32; 4]); 3] = [
    (&[], [1, 2, 3, 4], [4, 3, 2, 1]),
    (&[2], [1, 3, 2, 4], [2, 4, 3, 1]),
    (&[3], [1, 3, 4, 2], [4, 2, 3, 1]),
];

/// Pairs at Hamming distance 5 in `S_5`, keyed by peak set.
const BASE_5: [(&[u32], [u32; 5], [u32; 5]); 5] = [
    (&[], [1, 2, 3, 4, 5], [5, 3, 2, 1, 4]),
    (&[2], [1, 3, 2, 4, 5], [2, 5, 3, 1, 4]),
    (&[3], [1, 3, 4, 2, 5], [5, 2, 3, 1, 4]),
    (&[4], [4, 3, 2, 5, 1], [5, 4, 1, 3, 2]),
    (&[2, 4], [1, 3, 2, 5, 4], [4, 5, 1, 3, 2]),
];

fn lookup<const N: usize>(
    table: &[(&[u32], [u32; N], [u32; N])],
    s: &PeakSet,
) -> (Permutation, Permutation) {
    let (_, a, b) = table
        .iter()
        .find(|(key, _, _)| *key == s.indices())
        .expect("admissible peak set missing from base table");
    (
        Permutation::from_vec_unchecked(a.to_vec()),
        Permutation::from_vec_unchecked(b.to_vec()),
    )
}

/// A pair in `P(s;n)` differing in every position (or the largest possible
/// Hamming distance when `n <= 3`).
///
/// `n = 4, 5` come from fixed tables. Larger `n` extend a smaller pair:
/// when `n-1` is not a peak, append `n` to both and swap the values `n-1, n`
/// in one of them; when `n-1` is a peak, append `n, n-1` to one and, in the
/// other, replace `n-2` by `n` and append `n-1, n-2`.
pub fn max_hamming_pair(s: &PeakSet, n: usize) -> Result<ExtremalPair> {
    require_pair(s, n)?;
    let (a, b) = hamming_pair(s, n);
    Ok(ExtremalPair {
        n,
        s: s.clone(),
        metric: MetricKind::Hamming,
        claimed_distance: max_hamming_claim(s, n),
        a,
        b,
    })
}

fn hamming_pair(s: &PeakSet, n: usize) -> (Permutation, Permutation) {
    let (a, b) = match n {
        2 => (Permutation::identity(2), Permutation::reverse_identity(2)),
        3 if s.is_empty() => (
            Permutation::identity(3),
            Permutation::from_vec_unchecked(vec![3, 1, 2]),
        ),
        3 => (
            Permutation::from_vec_unchecked(vec![1, 3, 2]),
            Permutation::from_vec_unchecked(vec![2, 3, 1]),
        ),
        4 => lookup(&BASE_4, s),
        5 => lookup(&BASE_5, s),
        _ if !s.contains(n as u32 - 1) => {
            let top = n as u32;
            let (sigma, rho) = oriented(hamming_pair(s, n - 1), n - 1);
            let mut sigma = sigma.into_values();
            sigma.push(top);
            let mut rho = rho.into_values();
            rho.push(top);
            let rho = Permutation::from_vec_unchecked(rho)
                .apply_value_swap(AdjacentValueSwap::new(top - 1))
                .expect("n-1 is in range");
            (Permutation::from_vec_unchecked(sigma), rho)
        }
        _ => {
            let top = n as u32;
            let (sigma, rho) = oriented(hamming_pair(&s.without(top - 1), n - 2), n - 2);
            let mut sigma = sigma.into_values();
            sigma.extend([top, top - 1]);
            let mut rho: Vec<u32> = rho
                .into_values()
                .into_iter()
                .map(|v| if v == top - 2 { top } else { v })
                .collect();
            rho.extend([top - 1, top - 2]);
            (
                Permutation::from_vec_unchecked(sigma),
                Permutation::from_vec_unchecked(rho),
            )
        }
    };
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Orders the pair so that the second member does not hold `m` at position `m`.
/// The members differ everywhere, so at most one of them can.
fn oriented((sigma, rho): (Permutation, Permutation), m: usize) -> (Permutation, Permutation) {
    if rho.at(m) == m as u32 {
        (rho, sigma)
    } else {
        (sigma, rho)
    }
}

/// The maximising construction for `metric`.
pub fn max_pair(s: &PeakSet, n: usize, metric: MetricKind) -> Result<ExtremalPair> {
    match metric {
        MetricKind::Hamming => max_hamming_pair(s, n),
        MetricKind::Linf => max_linf_pair(s, n),
        MetricKind::KendallTau => max_kendall_pair(s, n),
    }
}
