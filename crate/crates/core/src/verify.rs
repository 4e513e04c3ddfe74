//! Checks the closed-form extremes against exhaustive search and reports the
//! outcome per theorem.
//!
//! Every failing report carries a [`Counterexample`] that can be re-checked
//! through the public metric and class operations with
//! [`Counterexample::replay`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::constructions::{
    max_hamming_claim, max_kendall_claim, max_linf_claim, max_pair, min_pair, ExtremalPair,
};
use crate::enumerate::{
    class_size, class_summaries, distance_summary, enumerate_sn, pair_extremes, partition_check,
    peak_classes, DistanceSummary, Limits,
};
use crate::error::{Error, Result};
use crate::metrics::{kendall_tau, kendall_tau_fast, minimal_swap_path, MetricKind};
use crate::peaks::{peak_set, PeakSet};
use crate::perm::Permutation;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_SAMPLES: u64 = 100_000;
/// Largest `n` whose triples are checked exhaustively for the metric axioms.
pub const EXHAUSTIVE_TRIPLES_MAX: usize = 5;
/// Largest `n` whose ordered pairs are checked exhaustively for the Kendall-Tau
/// routes.
pub const EXHAUSTIVE_PAIRS_MAX: usize = 6;
/// Constructions are checked directly (without enumeration) up to this size.
pub const CONSTRUCTION_N_MAX: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    MetricAxioms,
    SnExtremes,
    KtEquivalence,
    MinOverClasses,
    MaxKendall,
    MaxLinf,
    MaxHamming,
    Partition,
    CardinalityDivisibility,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::MetricAxioms,
        TheoremId::SnExtremes,
        TheoremId::KtEquivalence,
        TheoremId::MinOverClasses,
        TheoremId::MaxKendall,
        TheoremId::MaxLinf,
        TheoremId::MaxHamming,
        TheoremId::Partition,
        TheoremId::CardinalityDivisibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::MetricAxioms => "metric_axioms",
            TheoremId::SnExtremes => "sn_extremes",
            TheoremId::KtEquivalence => "kt_equivalence",
            TheoremId::MinOverClasses => "min_over_classes",
            TheoremId::MaxKendall => "max_kendall",
            TheoremId::MaxLinf => "max_linf",
            TheoremId::MaxHamming => "max_hamming",
            TheoremId::Partition => "partition",
            TheoremId::CardinalityDivisibility => "cardinality_divisibility",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown theorem id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Identity,
    Symmetry,
    Triangle,
}

/// Random spot-check parameters for sizes beyond exhaustive reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

/// Data that exhibits a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// The brute-force extreme over `P(peak_set; n)` (or all of `S_n` when
    /// `peak_set` is absent) differs from the closed form.
    Extreme {
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        peak_set: Option<PeakSet>,
        metric: MetricKind,
        extreme: Extreme,
        expected: u64,
        observed: u64,
        witness: (Permutation, Permutation),
    },
    /// A construction left its class or missed its claimed distance.
    Construction {
        pair: ExtremalPair,
        observed: Option<u64>,
    },
    KendallRoutes {
        a: Permutation,
        b: Permutation,
        deranged_pairs: u64,
        inversions: u64,
        path_length: u64,
    },
    Axiom {
        metric: MetricKind,
        axiom: Axiom,
        points: Vec<Permutation>,
    },
    Partition {
        n: usize,
    },
    Divisibility {
        n: usize,
        peak_set: PeakSet,
        size: u64,
        exponent: u32,
    },
}

impl Counterexample {
    /// Re-runs the failed check through the public operations; true when the
    /// failure reproduces.
    pub fn replay(&self, limits: &Limits) -> Result<bool> {
        Ok(match self {
            Counterexample::Extreme {
                n,
                peak_set: Some(s),
                metric,
                extreme,
                expected,
                observed,
                witness,
            } => {
                let summary = distance_summary(s, *n, *metric, limits)?;
                let value = match extreme {
                    Extreme::Min => summary.min,
                    Extreme::Max => summary.max,
                };
                let (a, b) = witness;
                value != *expected
                    && value == *observed
                    && metric.distance(a, b)? == *observed
                    && peak_set(a) == *s
                    && peak_set(b) == *s
            }
            Counterexample::Extreme {
                n,
                peak_set: None,
                metric,
                extreme,
                expected,
                observed,
                witness,
            } => {
                let all: Vec<Permutation> = enumerate_sn(*n, limits)?.collect();
                let mut value = None::<u64>;
                for (i, a) in all.iter().enumerate() {
                    for b in &all[i + 1..] {
                        let d = metric.distance(a, b)?;
                        value = Some(match (value, extreme) {
                            (None, _) => d,
                            (Some(v), Extreme::Min) => v.min(d),
                            (Some(v), Extreme::Max) => v.max(d),
                        });
                    }
                }
                value != Some(*expected)
                    && value == Some(*observed)
                    && metric.distance(&witness.0, &witness.1)? == *observed
            }
            Counterexample::Construction { pair, .. } => !pair.holds(),
            Counterexample::KendallRoutes { a, b, .. } => kendall_routes_disagree(a, b)?.is_some(),
            Counterexample::Axiom {
                metric,
                axiom,
                points,
            } => axiom_violated(*metric, *axiom, points)?,
            Counterexample::Partition { n } => !partition_check(*n, limits)?,
            Counterexample::Divisibility { n, peak_set, .. } => matches!(
                class_size(peak_set, *n, limits),
                Err(Error::DivisibilityViolation { .. })
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem_id: TheoremId,
    pub n_range: [usize; 2],
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

fn report(
    theorem_id: TheoremId,
    n_range: [usize; 2],
    seed: Option<u64>,
    started: Instant,
    counterexample: Option<Counterexample>,
) -> VerificationReport {
    VerificationReport {
        theorem_id,
        n_range,
        status: if counterexample.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        counterexample,
        elapsed: started.elapsed(),
        seed,
    }
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    values.shuffle(rng);
    Permutation::from_vec_unchecked(values)
}

fn axiom_violated(metric: MetricKind, axiom: Axiom, points: &[Permutation]) -> Result<bool> {
    let d = |x: &Permutation, y: &Permutation| metric.distance(x, y);
    Ok(match (axiom, points) {
        (Axiom::Identity, [a, b]) => (d(a, b)? == 0) != (a == b),
        (Axiom::Symmetry, [a, b]) => d(a, b)? != d(b, a)?,
        (Axiom::Triangle, [a, b, c]) => d(a, c)? > d(a, b)? + d(b, c)?,
        _ => false,
    })
}

fn check_triple(
    metric: MetricKind,
    a: &Permutation,
    b: &Permutation,
    c: &Permutation,
) -> Result<Option<Counterexample>> {
    let cases = [
        (Axiom::Identity, vec![a.clone(), a.clone()]),
        (Axiom::Identity, vec![a.clone(), b.clone()]),
        (Axiom::Symmetry, vec![a.clone(), b.clone()]),
        (Axiom::Triangle, vec![a.clone(), b.clone(), c.clone()]),
    ];
    for (axiom, points) in cases {
        if axiom_violated(metric, axiom, &points)? {
            return Ok(Some(Counterexample::Axiom {
                metric,
                axiom,
                points,
            }));
        }
    }
    Ok(None)
}

/// Identity of indiscernibles, symmetry and the triangle inequality for all
/// three metrics: every triple for `n <= 5`, then `sampling.samples` random
/// triples for each larger `n` up to `n_max`.
pub fn verify_metric_axioms(n_max: usize, sampling: Sampling) -> Result<VerificationReport> {
    let started = Instant::now();
    let limits = Limits::default();
    let exhaustive_top = n_max.min(EXHAUSTIVE_TRIPLES_MAX);
    let found = (|| -> Result<Option<Counterexample>> {
        for n in 1..=exhaustive_top {
            let perms: Vec<Permutation> = enumerate_sn(n, &limits)?.collect();
            let m = perms.len();
            for metric in MetricKind::ALL {
                let mut table = vec![0u64; m * m];
                for (i, a) in perms.iter().enumerate() {
                    for (j, b) in perms.iter().enumerate() {
                        table[i * m + j] = metric.distance(a, b)?;
                    }
                }
                let hit = (0..m).into_par_iter().find_map_first(|i| {
                    for j in 0..m {
                        let dij = table[i * m + j];
                        if (dij == 0) != (i == j) {
                            return Some((Axiom::Identity, vec![i, j]));
                        }
                        if dij != table[j * m + i] {
                            return Some((Axiom::Symmetry, vec![i, j]));
                        }
                        for k in 0..m {
                            if table[i * m + k] > dij + table[j * m + k] {
                                return Some((Axiom::Triangle, vec![i, j, k]));
                            }
                        }
                    }
                    None
                });
                if let Some((axiom, idx)) = hit {
                    return Ok(Some(Counterexample::Axiom {
                        metric,
                        axiom,
                        points: idx.into_iter().map(|i| perms[i].clone()).collect(),
                    }));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        for n in exhaustive_top + 1..=n_max {
            for _ in 0..sampling.samples {
                let a = random_permutation(n, &mut rng);
                let b = random_permutation(n, &mut rng);
                let c = random_permutation(n, &mut rng);
                for metric in MetricKind::ALL {
                    if let Some(cx) = check_triple(metric, &a, &b, &c)? {
                        return Ok(Some(cx));
                    }
                }
            }
        }
        Ok(None)
    })()?;
    let seed = (n_max > exhaustive_top).then_some(sampling.seed);
    Ok(report(
        TheoremId::MetricAxioms,
        [1, n_max],
        seed,
        started,
        found,
    ))
}

pub fn sn_extreme_claims(metric: MetricKind, n: usize) -> (u64, u64) {
    let n64 = n as u64;
    match metric {
        MetricKind::Hamming => (2, n64),
        MetricKind::Linf => (1, n64 - 1),
        MetricKind::KendallTau => (1, n64 * (n64 - 1) / 2),
    }
}

/// Brute-force min/max of each metric over distinct pairs of `S_n`,
/// `2 <= n <= n_max`.
pub fn verify_sn_extremes(n_max: usize, limits: &Limits) -> Result<VerificationReport> {
    sn_extremes_with(n_max, limits, sn_extreme_claims)
}

pub(crate) fn sn_extremes_with(
    n_max: usize,
    limits: &Limits,
    claims: impl Fn(MetricKind, usize) -> (u64, u64),
) -> Result<VerificationReport> {
    limits.check_pairwise(n_max)?;
    let started = Instant::now();
    let mut found = None;
    'outer: for n in 2..=n_max {
        let perms: Vec<Permutation> = enumerate_sn(n, limits)?.collect();
        let extremes = pair_extremes(&perms, n);
        for (k, metric) in MetricKind::ALL.into_iter().enumerate() {
            let (min, max) = claims(metric, n);
            let e = extremes[k];
            for (extreme, expected, (observed, i, j)) in
                [(Extreme::Min, min, e.min), (Extreme::Max, max, e.max)]
            {
                if observed != expected {
                    found = Some(Counterexample::Extreme {
                        n,
                        peak_set: None,
                        metric,
                        extreme,
                        expected,
                        observed,
                        witness: (perms[i].clone(), perms[j].clone()),
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(report(
        TheoremId::SnExtremes,
        [2, n_max],
        None,
        started,
        found,
    ))
}

fn kendall_routes_disagree(a: &Permutation, b: &Permutation) -> Result<Option<Counterexample>> {
    let deranged_pairs = kendall_tau(a, b)?;
    let inversions = kendall_tau_fast(a, b)?;
    let path = minimal_swap_path(a, b)?;
    let path_length = path.len() as u64;
    let agree = deranged_pairs == inversions && inversions == path_length && path.replay()? == *b;
    Ok((!agree).then(|| Counterexample::KendallRoutes {
        a: a.clone(),
        b: b.clone(),
        deranged_pairs,
        inversions,
        path_length,
    }))
}

/// Deranged-pair count, inversion count of `b ∘ a⁻¹`, and minimal swap path
/// length agree (and the path reaches `b`): every ordered pair for `n <= 6`,
/// `sampling.samples` random pairs for each larger `n` up to `n_max`.
pub fn verify_kt_equivalence(n_max: usize, sampling: Sampling) -> Result<VerificationReport> {
    let started = Instant::now();
    let limits = Limits::default();
    let exhaustive_top = n_max.min(EXHAUSTIVE_PAIRS_MAX);
    let found = (|| -> Result<Option<Counterexample>> {
        for n in 1..=exhaustive_top {
            let perms: Vec<Permutation> = enumerate_sn(n, &limits)?.collect();
            let hit = perms.par_iter().find_map_first(|a| {
                perms
                    .iter()
                    .find_map(|b| kendall_routes_disagree(a, b).transpose())
            });
            if let Some(hit) = hit {
                return hit.map(Some);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        for n in exhaustive_top + 1..=n_max {
            for _ in 0..sampling.samples {
                let a = random_permutation(n, &mut rng);
                let b = random_permutation(n, &mut rng);
                if let Some(cx) = kendall_routes_disagree(&a, &b)? {
                    return Ok(Some(cx));
                }
            }
        }
        Ok(None)
    })()?;
    let seed = (n_max > exhaustive_top).then_some(sampling.seed);
    Ok(report(
        TheoremId::KtEquivalence,
        [1, n_max],
        seed,
        started,
        found,
    ))
}

/// Closed forms checked by [`verify_class_theorems`].
pub(crate) struct ClassClaims {
    pub min: fn(MetricKind) -> u64,
    pub max: fn(MetricKind, &PeakSet, usize) -> u64,
}

fn min_claim(metric: MetricKind) -> u64 {
    if metric == MetricKind::Hamming {
        2
    } else {
        1
    }
}

fn max_claim(metric: MetricKind, s: &PeakSet, n: usize) -> u64 {
    match metric {
        MetricKind::Hamming => max_hamming_claim(s, n),
        MetricKind::Linf => max_linf_claim(s, n),
        MetricKind::KendallTau => max_kendall_claim(s, n),
    }
}

const CLAIMS: ClassClaims = ClassClaims {
    min: min_claim,
    max: max_claim,
};

/// Minima and the three maxima over every peak class with at least two
/// members, `2 <= n <= n_max`, against brute force; and the explicit
/// constructions for every admissible set up to `max(n_max,
/// construction_n_max)`.
///
/// Returns reports for `min_over_classes`, `max_kendall`, `max_linf` and
/// `max_hamming`, in that order.
pub fn verify_class_theorems(
    n_max: usize,
    construction_n_max: usize,
    limits: &Limits,
) -> Result<Vec<VerificationReport>> {
    class_theorems_with(n_max, construction_n_max, limits, &CLAIMS)
}

pub(crate) fn class_theorems_with(
    n_max: usize,
    construction_n_max: usize,
    limits: &Limits,
    claims: &ClassClaims,
) -> Result<Vec<VerificationReport>> {
    limits.check_pairwise(n_max)?;
    let shared_start = Instant::now();
    let mut summaries: Vec<[DistanceSummary; 3]> = Vec::new();
    for n in 2..=n_max {
        for class in peak_classes(n, limits)? {
            if class.len() >= 2 {
                summaries.push(class_summaries(&class)?);
            }
        }
    }
    let shared = shared_start.elapsed();
    let top = n_max.max(construction_n_max);

    let brute = |metric: MetricKind, extreme: Extreme| {
        summaries.iter().find_map(|row| {
            let sm = &row[MetricKind::ALL.iter().position(|&m| m == metric).unwrap()];
            let (expected, observed, witness) = match extreme {
                Extreme::Min => ((claims.min)(metric), sm.min, &sm.min_witness),
                Extreme::Max => ((claims.max)(metric, &sm.s, sm.n), sm.max, &sm.max_witness),
            };
            (expected != observed).then(|| Counterexample::Extreme {
                n: sm.n,
                peak_set: Some(sm.s.clone()),
                metric,
                extreme,
                expected,
                observed,
                witness: witness.clone(),
            })
        })
    };
    let construction = |pair: ExtremalPair| -> Option<Counterexample> {
        (!pair.holds()).then(|| Counterexample::Construction {
            observed: pair.metric.distance(&pair.a, &pair.b).ok(),
            pair,
        })
    };

    let mut reports = Vec::new();

    let started = Instant::now();
    let mut found = MetricKind::ALL
        .into_iter()
        .find_map(|m| brute(m, Extreme::Min));
    if found.is_none() {
        'min: for n in 2..=top {
            for s in PeakSet::all_admissible(n) {
                for mut pair in min_pair(&s, n)? {
                    pair.claimed_distance = (claims.min)(pair.metric);
                    if let Some(cx) = construction(pair) {
                        found = Some(cx);
                        break 'min;
                    }
                }
            }
        }
    }
    reports.push(report(
        TheoremId::MinOverClasses,
        [2, n_max],
        None,
        started,
        found,
    ));

    for (id, metric) in [
        (TheoremId::MaxKendall, MetricKind::KendallTau),
        (TheoremId::MaxLinf, MetricKind::Linf),
        (TheoremId::MaxHamming, MetricKind::Hamming),
    ] {
        let started = Instant::now();
        let mut found = brute(metric, Extreme::Max);
        if found.is_none() {
            'max: for n in 2..=top {
                for s in PeakSet::all_admissible(n) {
                    let mut pair = max_pair(&s, n, metric)?;
                    pair.claimed_distance = (claims.max)(metric, &s, n);
                    if let Some(cx) = construction(pair) {
                        found = Some(cx);
                        break 'max;
                    }
                }
            }
        }
        reports.push(report(id, [2, top], None, started, found));
    }
    for r in &mut reports {
        r.elapsed += shared;
    }
    Ok(reports)
}

/// The peak classes partition `S_n`, and each class size is divisible by
/// `2^(n - |S| - 1)`, for `1 <= n <= n_max`.
///
/// Returns reports for `partition` and `cardinality_divisibility`.
pub fn verify_structural(n_max: usize, limits: &Limits) -> Result<Vec<VerificationReport>> {
    limits.check_enumeration(n_max)?;
    let started = Instant::now();
    let mut found = None;
    for n in 1..=n_max {
        if !partition_check(n, limits)? {
            found = Some(Counterexample::Partition { n });
            break;
        }
    }
    let partition = report(TheoremId::Partition, [1, n_max], None, started, found);

    let started = Instant::now();
    let mut found = None;
    'outer: for n in 1..=n_max {
        for s in PeakSet::all_admissible(n) {
            match class_size(&s, n, limits) {
                Ok(_) => {}
                Err(Error::DivisibilityViolation {
                    set,
                    n,
                    size,
                    exponent,
                }) => {
                    found = Some(Counterexample::Divisibility {
                        n,
                        peak_set: set,
                        size,
                        exponent,
                    });
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
    }
    let divisibility = report(
        TheoremId::CardinalityDivisibility,
        [1, n_max],
        None,
        started,
        found,
    );
    Ok(vec![partition, divisibility])
}

/// Runs the requested theorems (all of them when `theorem` is `None`) and
/// returns their reports ordered by theorem id.
pub fn verify(
    theorem: Option<TheoremId>,
    n_max: usize,
    sampling: Sampling,
    limits: &Limits,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    verify_streaming(theorem, n_max, sampling, limits, |r| {
        reports.push(r.clone())
    })?;
    Ok(reports)
}

/// Like [`verify`], handing each report to `sink` as soon as its group of
/// checks finishes. Reports arrive in theorem-id order.
pub fn verify_streaming(
    theorem: Option<TheoremId>,
    n_max: usize,
    sampling: Sampling,
    limits: &Limits,
    mut sink: impl FnMut(&VerificationReport),
) -> Result<()> {
    let wanted = |t: TheoremId| theorem.is_none_or(|x| x == t);
    let mut emit = |reports: Vec<VerificationReport>| {
        reports
            .iter()
            .filter(|r| wanted(r.theorem_id))
            .for_each(&mut sink)
    };
    if wanted(TheoremId::MetricAxioms) {
        emit(vec![verify_metric_axioms(n_max, sampling)?]);
    }
    if wanted(TheoremId::SnExtremes) {
        emit(vec![verify_sn_extremes(n_max, limits)?]);
    }
    if wanted(TheoremId::KtEquivalence) {
        emit(vec![verify_kt_equivalence(n_max, sampling)?]);
    }
    let class_ids = [
        TheoremId::MinOverClasses,
        TheoremId::MaxKendall,
        TheoremId::MaxLinf,
        TheoremId::MaxHamming,
    ];
    if class_ids.into_iter().any(wanted) {
        emit(verify_class_theorems(
            n_max,
            n_max.max(CONSTRUCTION_N_MAX),
            limits,
        )?);
    }
    if wanted(TheoremId::Partition) || wanted(TheoremId::CardinalityDivisibility) {
        emit(verify_structural(n_max, limits)?);
    }
    Ok(())
}
