use proptest::prelude::*;

use subteach::corpus::Split;
use subteach::evaluation::{
    aggregate_runs, hit_at_k, mean_reciprocal_rank, EvalRecord, LearningCurve, Metrics,
};

fn curve(run: usize, values: &[f64]) -> LearningCurve {
    let records: Vec<EvalRecord> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let metrics = Metrics {
                hit1: v,
                hit10: 1.0 - v,
                mrr: v / 2.0,
            };
            EvalRecord::new(run, 100 * (k + 1), Split::Validation, metrics, 0.0)
        })
        .collect();
    LearningCurve::try_from(records).unwrap()
}

#[test]
fn four_curves_match_precomputed_statistics() {
    let rows = [
        [0.6229, 0.7418, 0.7952],
        [0.9425, 0.7399, 0.9223],
        [0.029, 0.4656, 0.9434],
        [0.649, 0.9009, 0.1132],
    ];
    // Mean and sample standard deviation per column, computed independently.
    let expected = [
        (0.56085, 0.38303253560674627),
        (0.71205, 0.18079694872056518),
        (0.693525, 0.3923817985500007),
    ];
    let curves: Vec<LearningCurve> = rows.iter().enumerate().map(|(r, v)| curve(r, v)).collect();
    let agg = aggregate_runs(&curves).unwrap();
    assert_eq!(agg.len(), 3);
    for (a, (mean, std)) in agg.iter().zip(expected) {
        assert_eq!(a.runs, 4);
        assert!((a.hit1_mean - mean).abs() < 1e-12);
        assert!((a.hit1_std - std).abs() < 1e-12);
        assert!((a.hit10_mean - (1.0 - mean)).abs() < 1e-12);
        assert!((a.hit10_std - std).abs() < 1e-12);
        assert!((a.mrr_mean - mean / 2.0).abs() < 1e-12);
        assert!((a.mrr_std - std / 2.0).abs() < 1e-12);
    }
}

#[test]
fn a_single_run_has_zero_spread() {
    let agg = aggregate_runs(&[curve(0, &[0.3, 0.4])]).unwrap();
    assert!(agg.iter().all(|a| a.hit1_std == 0.0 && a.runs == 1));
}

fn ranks() -> impl Strategy<Value = Vec<Option<usize>>> {
    prop::collection::vec(prop::option::weighted(0.95, 1usize..60), 1..200)
}

proptest! {
    #[test]
    fn hit_at_k_is_monotone_in_k(r in ranks()) {
        let mut previous = 0.0;
        for k in 1..70 {
            let h = hit_at_k(&r, k);
            prop_assert!(h >= previous);
            previous = h;
        }
    }

    #[test]
    fn metrics_are_bounded_and_mrr_dominates_hit1(r in ranks()) {
        let m = Metrics::from_ranks(&r);
        for v in [m.hit1, m.hit10, m.mrr] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(m.mrr >= m.hit1);
        prop_assert!(m.hit10 >= m.hit1);
        prop_assert_eq!(m.mrr, mean_reciprocal_rank(&r));
    }
}
