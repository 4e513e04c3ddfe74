//! Peak sets and the peak-preserving value swap.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{AdjacentValueSwap, Permutation};

/// A set of 1-based positions, stored sorted and deduplicated.
///
/// Any set of positive integers can be represented so that admissibility can
/// be asked of arbitrary candidates; sets produced by [`peak_set`] are always
/// admissible.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeakSet(Vec<u32>);

impl PeakSet {
    pub fn new(indices: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PeakSet(v)
    }

    pub fn empty() -> Self {
        PeakSet(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: u32) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn without(&self, index: u32) -> PeakSet {
        PeakSet(self.0.iter().copied().filter(|&i| i != index).collect())
    }

    /// Every admissible peak set for `n`, ordered by the set's sorted index
    /// sequence.
    pub fn all_admissible(n: usize) -> Vec<PeakSet> {
        fn extend(next: u32, last: u32, current: &mut Vec<u32>, out: &mut Vec<PeakSet>) {
            out.push(PeakSet(current.clone()));
            for i in next..=last {
                current.push(i);
                extend(i + 2, last, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        extend(2, n.saturating_sub(1) as u32, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for PeakSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PeakSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeakSet{self}")
    }
}

/// Accepts `{2,5,7}`, `2,5,7`, `{}` and the empty string.
impl FromStr for PeakSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(trimmed);
        let indices = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(k, token)| {
                token.parse::<u32>().map_err(|_| Error::Parse {
                    position: k + 1,
                    token: token.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PeakSet::new(indices))
    }
}

impl Serialize for PeakSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Positions `i` in `2..=n-1` with `v[i-1] < v[i] > v[i+1]` (1-based).
pub fn peak_set(p: &Permutation) -> PeakSet {
    PeakSet(peak_positions(p.values()).collect())
}

pub(crate) fn peak_positions(values: &[u32]) -> impl Iterator<Item = u32> + '_ {
    values
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1] && w[1] > w[2])
        .map(|(k, _)| k as u32 + 2)
}

/// Peak positions packed as a bitmask (bit `i` set for a peak at `i`).
/// Only meaningful for `n <= 64`.
pub(crate) fn peak_mask(values: &[u32]) -> u64 {
    peak_positions(values).fold(0, |m, i| m | (1 << i))
}

impl PeakSet {
    pub(crate) fn mask(&self) -> u64 {
        self.0
            .iter()
            .filter(|&&i| i < 64)
            .fold(0, |m, &i| m | (1 << i))
    }
}

/// True iff some permutation of `n` has exactly this peak set: every index lies
/// in `2..=n-1` and no two indices are consecutive.
pub fn is_admissible(s: &PeakSet, n: usize) -> bool {
    let interior = s.0.iter().all(|&i| i >= 2 && (i as usize) < n);
    let spaced = s.0.windows(2).all(|w| w[1] - w[0] >= 2);
    interior && spaced
}

/// Swaps the values `i` and `i + 1` when that is guaranteed to keep the peak
/// set: always for `i = 1`, and for `i >= 2` only when the two values are not
/// in adjacent positions.
pub fn checked_value_swap(p: &Permutation, i: u32) -> Result<Permutation> {
    let n = p.len();
    if i == 0 || i as usize >= n {
        return Err(Error::SwapOutOfRange { value: i, n });
    }
    if i >= 2 && p.position_of(i).abs_diff(p.position_of(i + 1)) == 1 {
        return Err(Error::SwapRejected { value: i });
    }
    p.apply_value_swap(AdjacentValueSwap::new(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(v: &[u32]) -> PeakSet {
        PeakSet::new(v.iter().copied())
    }

    fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n as u32)
            .permutations(n)
            .map(|v| Permutation::from_one_line(v).unwrap())
    }

    #[test]
    fn extracts_peaks() {
        assert_eq!(peak_set(&p("58327164")), set(&[2, 5, 7]));
        assert_eq!(peak_set(&p("132465879")), set(&[2, 5, 7]));
        for n in 1..=9 {
            assert!(peak_set(&Permutation::identity(n)).is_empty());
        }
        assert_eq!(peak_set(&p("58327164")).to_string(), "{2,5,7}");
        assert_eq!(PeakSet::empty().to_string(), "{}");
    }

    #[test]
    fn parses_peak_sets() {
        assert_eq!("{2,5,7}".parse::<PeakSet>().unwrap(), set(&[2, 5, 7]));
        assert_eq!("7, 2,5".parse::<PeakSet>().unwrap(), set(&[2, 5, 7]));
        assert_eq!("{}".parse::<PeakSet>().unwrap(), PeakSet::empty());
        assert_eq!("".parse::<PeakSet>().unwrap(), PeakSet::empty());
        assert!(matches!(
            "{2,x}".parse::<PeakSet>(),
            Err(Error::Parse { position: 2, .. })
        ));
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&set(&[2, 5, 7]), 9));
        assert!(!is_admissible(&set(&[2, 3]), 5));
        assert!(!is_admissible(&set(&[1]), 5));
        assert!(!is_admissible(&set(&[5]), 5));
        for n in 1..=6 {
            assert!(is_admissible(&PeakSet::empty(), n));
        }
    }

    #[test]
    fn extracted_peak_sets_are_interior_and_spaced() {
        for n in 1..=8 {
            for sigma in all(n) {
                let s = peak_set(&sigma);
                assert!(is_admissible(&s, n), "{sigma} -> {s}");
                assert_eq!(s.mask(), peak_mask(sigma.values()));
            }
        }
    }

    #[test]
    fn closed_form_admissibility_matches_enumeration() {
        for n in 1..=8usize {
            let realised: BTreeSet<PeakSet> = all(n).map(|s| peak_set(&s)).collect();
            let candidates: Vec<PeakSet> =
                (2..n.max(2) as u32).powerset().map(PeakSet::new).collect();
            for s in &candidates {
                assert_eq!(is_admissible(s, n), realised.contains(s), "n={n} s={s}");
            }
            let listed: BTreeSet<PeakSet> = PeakSet::all_admissible(n).into_iter().collect();
            assert_eq!(listed, realised, "n={n}");
        }
    }

    #[test]
    fn checked_swap_examples() {
        let sigma = p("58327164");
        let swapped = checked_value_swap(&sigma, 3).unwrap();
        assert_eq!(swapped, p("58427163"));
        assert_eq!(peak_set(&swapped), set(&[2, 5, 7]));
        assert_eq!(
            checked_value_swap(&p("12345"), 3),
            Err(Error::SwapRejected { value: 3 })
        );
        assert_eq!(checked_value_swap(&p("12345"), 1).unwrap(), p("21345"));
        assert!(matches!(
            checked_value_swap(&p("12345"), 5),
            Err(Error::SwapOutOfRange { .. })
        ));
    }

    #[test]
    fn checked_swap_preserves_peak_set_exhaustively() {
        for n in 2..=7 {
            for sigma in all(n) {
                let before = peak_set(&sigma);
                for i in 1..n as u32 {
                    if let Ok(after) = checked_value_swap(&sigma, i) {
                        assert_eq!(peak_set(&after), before, "{sigma} swap {i}");
                    }
                }
            }
        }
    }
}
