//! Exhaustive enumeration of `S_n`, its partition into peak classes, and
//! brute-force min/max distance summaries over a class.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{hamming_slice, linf_slice, FastKendall, MetricKind};
use crate::peaks::{is_admissible, peak_mask, PeakSet};
use crate::perm::Permutation;

/// Size limits for exhaustive work.
///
/// `enumeration` bounds anything that walks `S_n`; `pairwise` bounds anything
/// quadratic in a class size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumeration: usize,
    pub pairwise: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 9,
            pairwise: 8,
        }
    }
}

impl Limits {
    pub fn check_enumeration(&self, n: usize) -> Result<()> {
        if n > self.enumeration {
            return Err(Error::CapExceeded {
                n,
                cap: self.enumeration,
            });
        }
        Ok(())
    }

    pub fn check_pairwise(&self, n: usize) -> Result<()> {
        self.check_enumeration(n)?;
        if n > self.pairwise {
            return Err(Error::CapExceeded {
                n,
                cap: self.pairwise,
            });
        }
        Ok(())
    }
}

/// All `n!` permutations in lexicographic order.
pub fn enumerate_sn(n: usize, limits: &Limits) -> Result<impl Iterator<Item = Permutation>> {
    limits.check_enumeration(n)?;
    if n == 0 {
        return Err(Error::NotAPermutation("n must be at least 1".into()));
    }
    Ok((1..=n as u32)
        .permutations(n)
        .map(Permutation::from_vec_unchecked))
}

/// `P(S;n)` with members in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakClass {
    pub s: PeakSet,
    pub n: usize,
    pub members: Vec<Permutation>,
}

impl PeakClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn peak_class(s: &PeakSet, n: usize, limits: &Limits) -> Result<PeakClass> {
    let members = if is_admissible(s, n) {
        let mask = s.mask();
        enumerate_sn(n, limits)?
            .filter(|p| peak_mask(p.values()) == mask)
            .collect()
    } else {
        limits.check_enumeration(n)?;
        Vec::new()
    };
    Ok(PeakClass {
        s: s.clone(),
        n,
        members,
    })
}

/// Every nonempty peak class of `S_n` from a single pass over `S_n`, ordered by
/// peak set.
pub fn peak_classes(n: usize, limits: &Limits) -> Result<Vec<PeakClass>> {
    let mut buckets: BTreeMap<PeakSet, Vec<Permutation>> = BTreeMap::new();
    for p in enumerate_sn(n, limits)? {
        buckets
            .entry(crate::peaks::peak_set(&p))
            .or_default()
            .push(p);
    }
    Ok(buckets
        .into_iter()
        .map(|(s, members)| PeakClass { s, n, members })
        .collect())
}

/// `|P(S;n)|` together with the factorisation `2^exponent * quotient`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassSize {
    pub size: u64,
    /// `n - |S| - 1`, when non-negative.
    pub exponent: Option<u32>,
    pub quotient: Option<u64>,
}

pub fn class_size(s: &PeakSet, n: usize, limits: &Limits) -> Result<ClassSize> {
    let class = peak_class(s, n, limits)?;
    factor_class_size(s, n, class.len() as u64)
}

pub(crate) fn factor_class_size(s: &PeakSet, n: usize, size: u64) -> Result<ClassSize> {
    let exponent = n
        .checked_sub(s.len() + 1)
        .and_then(|e| u32::try_from(e).ok())
        .filter(|&e| e < 64);
    let quotient = match exponent {
        Some(e) => {
            let divisor = 1u64 << e;
            if !size.is_multiple_of(divisor) {
                return Err(Error::DivisibilityViolation {
                    set: s.clone(),
                    n,
                    size,
                    exponent: e,
                });
            }
            Some(size / divisor)
        }
        None => None,
    };
    Ok(ClassSize {
        size,
        exponent,
        quotient,
    })
}

/// True iff the peak classes of `S_n` are pairwise disjoint, each is
/// admissible, and their sizes add up to `n!`.
pub fn partition_check(n: usize, limits: &Limits) -> Result<bool> {
    let classes = peak_classes(n, limits)?;
    let factorial: u64 = (1..=n as u64).product();
    let total: u64 = classes.iter().map(|c| c.len() as u64).sum();
    let mut seen = std::collections::HashSet::new();
    let disjoint = classes
        .iter()
        .flat_map(|c| c.members.iter())
        .all(|p| seen.insert(p));
    let admissible = classes.iter().all(|c| is_admissible(&c.s, n));
    // Cross-check against the closed form: every admissible set is realised.
    let realised = classes.len() == PeakSet::all_admissible(n).len();
    Ok(disjoint && admissible && realised && total == factorial)
}

/// Exact min and max of a metric over unordered distinct pairs of a class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceSummary {
    pub n: usize,
    #[serde(rename = "peak_set")]
    pub s: PeakSet,
    pub metric: MetricKind,
    pub class_size: usize,
    pub min: u64,
    pub max: u64,
    pub min_witness: (Permutation, Permutation),
    pub max_witness: (Permutation, Permutation),
}

pub fn distance_summary(
    s: &PeakSet,
    n: usize,
    metric: MetricKind,
    limits: &Limits,
) -> Result<DistanceSummary> {
    limits.check_pairwise(n)?;
    let class = peak_class(s, n, limits)?;
    let [h, l, k] = class_summaries(&class)?;
    Ok(match metric {
        MetricKind::Hamming => h,
        MetricKind::Linf => l,
        MetricKind::KendallTau => k,
    })
}

/// Summaries for all three metrics from one pass over the pairs of `class`,
/// in [`MetricKind::ALL`] order.
///
/// Among attaining pairs the witness is the lexicographically smallest
/// `(first, second)` with `first < second`; the parallel reduction is a total
/// order on `(value, i, j)` so the result does not depend on scheduling.
pub fn class_summaries(class: &PeakClass) -> Result<[DistanceSummary; 3]> {
    let members = &class.members;
    let m = members.len();
    if m < 2 {
        return Err(Error::ClassTooSmall { size: m });
    }
    let extremes = pair_extremes(members, class.n);
    let pair = |(_, i, j): (u64, usize, usize)| (members[i].clone(), members[j].clone());
    Ok(std::array::from_fn(|k| {
        let e = extremes[k];
        DistanceSummary {
            n: class.n,
            s: class.s.clone(),
            metric: MetricKind::ALL[k],
            class_size: m,
            min: e.min.0,
            max: e.max.0,
            min_witness: pair(e.min),
            max_witness: pair(e.max),
        }
    }))
}

/// Per-metric extremes over all `i < j` pairs of `members`, in
/// [`MetricKind::ALL`] order, each as `(distance, i, j)`.
pub(crate) fn pair_extremes(members: &[Permutation], n: usize) -> [Extremes; 3] {
    let m = members.len();
    let inverses: Vec<Permutation> = members.iter().map(Permutation::inverse).collect();
    (0..m.saturating_sub(1))
        .into_par_iter()
        .map_init(
            || FastKendall::new(n),
            |kernel, i| {
                let a = members[i].values();
                let a_inv = inverses[i].values();
                let mut acc = [Extremes::EMPTY; 3];
                for (j, b) in members.iter().enumerate().skip(i + 1) {
                    let b = b.values();
                    acc[0].observe(hamming_slice(a, b), i, j);
                    acc[1].observe(linf_slice(a, b), i, j);
                    acc[2].observe(kernel.distance(a_inv, b), i, j);
                }
                acc
            },
        )
        .reduce(
            || [Extremes::EMPTY; 3],
            |x, y| [x[0].merge(y[0]), x[1].merge(y[1]), x[2].merge(y[2])],
        )
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Extremes {
    pub(crate) min: (u64, usize, usize),
    pub(crate) max: (u64, usize, usize),
}

impl Extremes {
    const EMPTY: Extremes = Extremes {
        min: (u64::MAX, usize::MAX, usize::MAX),
        max: (0, usize::MAX, usize::MAX),
    };

    fn observe(&mut self, d: u64, i: usize, j: usize) {
        self.min = self.min.min((d, i, j));
        if d > self.max.0 || (d == self.max.0 && (i, j) < (self.max.1, self.max.2)) {
            self.max = (d, i, j);
        }
    }

    fn merge(mut self, other: Extremes) -> Extremes {
        self.observe(other.min.0, other.min.1, other.min.2);
        self.observe(other.max.0, other.max.1, other.max.2);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{hamming, kendall_tau, linf};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(v: &[u32]) -> PeakSet {
        PeakSet::new(v.iter().copied())
    }

    const L: Limits = Limits {
        enumeration: 9,
        pairwise: 8,
    };

    #[test]
    fn enumerates_lexicographically() {
        let s3: Vec<String> = enumerate_sn(3, &L).unwrap().map(|p| p.compact()).collect();
        assert_eq!(s3, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(enumerate_sn(1, &L).unwrap().count(), 1);
        assert_eq!(enumerate_sn(4, &L).unwrap().count(), 24);
        assert!(matches!(
            enumerate_sn(10, &L).map(|_| ()),
            Err(Error::CapExceeded { n: 10, cap: 9 })
        ));
    }

    #[test]
    fn classes() {
        let c = peak_class(&set(&[2]), 3, &L).unwrap();
        assert_eq!(c.members, [p("132"), p("231")]);
        assert!(peak_class(&set(&[2, 3]), 5, &L).unwrap().is_empty());
        let c = peak_class(&PeakSet::empty(), 2, &L).unwrap();
        assert_eq!(c.members, [p("12"), p("21")]);
    }

    #[test]
    fn sizes_and_quotients() {
        let c = class_size(&PeakSet::empty(), 4, &L).unwrap();
        assert_eq!((c.size, c.exponent, c.quotient), (8, Some(3), Some(1)));
        let c = class_size(&set(&[2]), 4, &L).unwrap();
        assert_eq!((c.size, c.exponent, c.quotient), (8, Some(2), Some(2)));
        assert_eq!(class_size(&set(&[2, 3]), 5, &L).unwrap().size, 0);
        assert!(matches!(
            factor_class_size(&set(&[2]), 4, 6),
            Err(Error::DivisibilityViolation { exponent: 2, .. })
        ));
    }

    #[test]
    fn partitions() {
        for n in 1..=8 {
            assert!(partition_check(n, &L).unwrap(), "n={n}");
        }
    }

    #[test]
    fn summary_examples() {
        let h = distance_summary(&PeakSet::empty(), 4, MetricKind::Hamming, &L).unwrap();
        assert_eq!((h.min, h.max, h.class_size), (2, 4, 8));
        let l = distance_summary(&set(&[2, 4]), 5, MetricKind::Linf, &L).unwrap();
        assert_eq!((l.min, l.max), (1, 3));
        let k = distance_summary(&set(&[2, 4]), 5, MetricKind::KendallTau, &L).unwrap();
        assert_eq!((k.min, k.max), (1, 6));
        assert_eq!(
            distance_summary(&set(&[2]), 3, MetricKind::Hamming, &L)
                .unwrap()
                .max,
            2
        );
    }

    #[test]
    fn summary_errors() {
        assert_eq!(
            distance_summary(&PeakSet::empty(), 1, MetricKind::Hamming, &L),
            Err(Error::ClassTooSmall { size: 1 })
        );
        assert_eq!(
            distance_summary(&set(&[2, 3]), 5, MetricKind::Hamming, &L),
            Err(Error::ClassTooSmall { size: 0 })
        );
        assert!(matches!(
            distance_summary(&PeakSet::empty(), 9, MetricKind::Hamming, &L),
            Err(Error::CapExceeded { n: 9, cap: 8 })
        ));
    }

    /// Sequential brute force over ordered index pairs, independent of the
    /// parallel reduction.
    fn naive(class: &PeakClass, metric: MetricKind) -> (u64, u64, (usize, usize), (usize, usize)) {
        let d = |a: &Permutation, b: &Permutation| match metric {
            MetricKind::Hamming => hamming(a, b).unwrap(),
            MetricKind::Linf => linf(a, b).unwrap(),
            MetricKind::KendallTau => kendall_tau(a, b).unwrap(),
        };
        let mut best_min = (u64::MAX, (0, 0));
        let mut best_max = (0, (0, 0));
        let m = class.members.len();
        for i in 0..m {
            for j in i + 1..m {
                let v = d(&class.members[i], &class.members[j]);
                if v < best_min.0 {
                    best_min = (v, (i, j));
                }
                if v > best_max.0 {
                    best_max = (v, (i, j));
                }
            }
        }
        (best_min.0, best_max.0, best_min.1, best_max.1)
    }

    #[test]
    fn summaries_match_naive_scan_with_lexicographic_witnesses() {
        for n in 2..=6 {
            for class in peak_classes(n, &L).unwrap() {
                if class.len() < 2 {
                    continue;
                }
                let summaries = class_summaries(&class).unwrap();
                for s in summaries {
                    let (min, max, wmin, wmax) = naive(&class, s.metric);
                    assert_eq!((s.min, s.max), (min, max));
                    let w = |(i, j): (usize, usize)| {
                        (class.members[i].clone(), class.members[j].clone())
                    };
                    assert_eq!(s.min_witness, w(wmin));
                    assert_eq!(s.max_witness, w(wmax));
                }
            }
        }
    }
}
