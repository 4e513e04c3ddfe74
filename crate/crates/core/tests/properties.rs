use proptest::prelude::*;

use peakmetrics::{
    checked_value_swap, is_admissible, kendall_tau, kendall_tau_fast, minimal_swap_path, peak_set,
    MetricKind, PeakSet, Permutation,
};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_one_line(v).unwrap())
}

fn sized_pair() -> impl Strategy<Value = (Permutation, Permutation)> {
    (1usize..=40).prop_flat_map(|n| (perm(n), perm(n)))
}

fn sized_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=20).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
}

proptest! {
    #[test]
    fn display_round_trips(p in (1usize..=60).prop_flat_map(perm)) {
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn peak_sets_are_admissible(p in (1usize..=60).prop_flat_map(perm)) {
        let s = peak_set(&p);
        prop_assert!(is_admissible(&s, p.len()));
        prop_assert_eq!(s.to_string().parse::<PeakSet>().unwrap(), s);
    }

    #[test]
    fn metric_axioms((a, b, c) in sized_triple()) {
        for metric in MetricKind::ALL {
            let d = |x: &Permutation, y: &Permutation| metric.distance(x, y).unwrap();
            prop_assert_eq!(d(&a, &a), 0);
            prop_assert_eq!(d(&a, &b) == 0, a == b);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        }
    }

    #[test]
    fn kendall_routes_agree((a, b) in sized_pair()) {
        let d = kendall_tau(&a, &b).unwrap();
        prop_assert_eq!(kendall_tau_fast(&a, &b).unwrap(), d);
        let path = minimal_swap_path(&a, &b).unwrap();
        prop_assert_eq!(path.len() as u64, d);
        prop_assert_eq!(path.replay().unwrap(), b);
    }

    #[test]
    fn accepted_swaps_keep_peaks(p in (2usize..=30).prop_flat_map(perm), k in 1u32..30) {
        let i = 1 + k % (p.len() as u32 - 1);
        if let Ok(q) = checked_value_swap(&p, i) {
            prop_assert_eq!(peak_set(&q), peak_set(&p));
            prop_assert_eq!(kendall_tau(&p, &q).unwrap(), 1);
        }
    }
}
