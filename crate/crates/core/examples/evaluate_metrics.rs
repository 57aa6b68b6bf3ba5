//! Ranking metrics and multi-run aggregation.
//!
//! cargo run --example evaluate_metrics

use subteach::corpus::Split;
use subteach::evaluation::{aggregate_runs, EvalRecord, LearningCurve, Metrics};

fn main() -> subteach::Result<()> {
    let m = Metrics::from_ranks(&[Some(1), Some(2), Some(4)]);
    println!(
        "ranks [1, 2, 4]: hit@1 {:.4} hit@10 {:.4} mrr {:.4}",
        m.hit1, m.hit10, m.mrr
    );

    let m = Metrics::from_ranks(&[Some(10), Some(11), None]);
    println!(
        "ranks [10, 11, missing]: hit@1 {:.4} hit@10 {:.4} mrr {:.4}",
        m.hit1, m.hit10, m.mrr
    );

    let runs = [[0.10, 0.40], [0.20, 0.50], [0.15, 0.45], [0.05, 0.60]];
    let curves: Vec<LearningCurve> = runs
        .iter()
        .enumerate()
        .map(|(r, values)| {
            let records = [100, 1000]
                .iter()
                .zip(values)
                .map(|(&seen, &v)| {
                    EvalRecord::new(
                        r,
                        seen,
                        Split::Validation,
                        Metrics {
                            hit1: v,
                            hit10: v * 2.0,
                            mrr: v * 1.3,
                        },
                        0.0,
                    )
                })
                .collect::<Vec<_>>();
            LearningCurve::try_from(records)
        })
        .collect::<subteach::Result<_>>()?;
    for row in aggregate_runs(&curves)? {
        println!(
            "@{:>5}: hit@1 {:.4} +- {:.4} over {} runs",
            row.examples_seen, row.hit1_mean, row.hit1_std, row.runs
        );
    }
    Ok(())
}
