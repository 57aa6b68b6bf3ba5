//! Rank-based metrics: hit@k and mean reciprocal rank.
//!
//! Every evaluation sample is scored on its own, so a query with several valid
//! targets contributes one sample per target.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{IngredientId, Split, SubstitutionExample};
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::vector::FeatureVector;

/// Fraction of samples whose target rank is at most `k`. Missing ranks never hit.
pub fn hit_at_k(ranks: &[Option<usize>], k: usize) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    let hits = ranks
        .iter()
        .filter(|r| matches!(r, Some(r) if *r <= k))
        .count();
    hits as f64 / ranks.len() as f64
}

/// Mean of `1 / rank`; missing ranks contribute 0.
pub fn mean_reciprocal_rank(ranks: &[Option<usize>]) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    let sum: f64 = ranks
        .iter()
        .map(|r| r.map_or(0.0, |r| 1.0 / r as f64))
        .sum();
    sum / ranks.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub hit1: f64,
    pub hit10: f64,
    pub mrr: f64,
}

impl Metrics {
    pub fn from_ranks(ranks: &[Option<usize>]) -> Self {
        Metrics {
            hit1: hit_at_k(ranks, 1),
            hit10: hit_at_k(ranks, 10),
            mrr: mean_reciprocal_rank(ranks),
        }
    }
}

/// 1-based rank of each sample's target under the learner's current state.
pub fn target_ranks(
    learner: &dyn Learner,
    samples: &[SubstitutionExample],
    queries: &[FeatureVector],
    candidates: &[IngredientId],
) -> Vec<Option<usize>> {
    assert_eq!(samples.len(), queries.len(), "one query vector per sample");
    samples
        .par_iter()
        .zip(queries.par_iter())
        .map(|(e, q)| learner.target_rank(e.source, q, e.target, candidates))
        .collect()
}

/// Evaluates every sample of a split. The learner is only read.
pub fn evaluate(
    learner: &dyn Learner,
    samples: &[SubstitutionExample],
    queries: &[FeatureVector],
    candidates: &[IngredientId],
) -> Result<Metrics> {
    if samples.is_empty() {
        return Err(Error::Data("evaluation split is empty".into()));
    }
    Ok(Metrics::from_ranks(&target_ranks(
        learner, samples, queries, candidates,
    )))
}

/// Metrics of one run at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub run_id: usize,
    pub examples_seen: usize,
    pub split: Split,
    pub hit1: f64,
    pub hit10: f64,
    pub mrr: f64,
    /// Wall-clock seconds since the run started.
    pub seconds: f64,
}

impl EvalRecord {
    pub fn new(
        run_id: usize,
        examples_seen: usize,
        split: Split,
        metrics: Metrics,
        seconds: f64,
    ) -> Self {
        EvalRecord {
            run_id,
            examples_seen,
            split,
            hit1: metrics.hit1,
            hit10: metrics.hit10,
            mrr: metrics.mrr,
            seconds,
        }
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            hit1: self.hit1,
            hit10: self.hit10,
            mrr: self.mrr,
        }
    }
}

/// Records of a single run on a single split, by increasing `examples_seen`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearningCurve {
    records: Vec<EvalRecord>,
}

impl LearningCurve {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: EvalRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.examples_seen <= last.examples_seen || record.split != last.split {
                return Err(Error::Runtime(format!(
                    "curve records must share a split and strictly increase in examples_seen ({} after {})",
                    record.examples_seen, last.examples_seen
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    pub fn grid(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.examples_seen).collect()
    }
}

impl TryFrom<Vec<EvalRecord>> for LearningCurve {
    type Error = Error;

    fn try_from(records: Vec<EvalRecord>) -> Result<Self> {
        let mut curve = LearningCurve::new();
        for r in records {
            curve.push(r)?;
        }
        Ok(curve)
    }
}

/// Mean and sample standard deviation (`n − 1`; 0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// One checkpoint of an aggregated curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub examples_seen: usize,
    pub split: Split,
    pub runs: usize,
    pub hit1_mean: f64,
    pub hit1_std: f64,
    pub hit10_mean: f64,
    pub hit10_std: f64,
    pub mrr_mean: f64,
    pub mrr_std: f64,
    pub seconds_mean: f64,
    pub seconds_std: f64,
}

/// Per-checkpoint mean and standard deviation across runs with identical grids.
pub fn aggregate_runs(curves: &[LearningCurve]) -> Result<Vec<AggregateRecord>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Runtime("nothing to aggregate".into()))?;
    let grid = first.grid();
    for c in curves {
        if c.grid() != grid
            || c.records.first().map(|r| r.split) != first.records.first().map(|r| r.split)
        {
            return Err(Error::Runtime(
                "curves have mismatched checkpoint grids".into(),
            ));
        }
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(k, &examples_seen)| {
            let column = |f: fn(&EvalRecord) -> f64| {
                curves.iter().map(|c| f(&c.records[k])).collect::<Vec<_>>()
            };
            let (hit1_mean, hit1_std) = mean_std(&column(|r| r.hit1));
            let (hit10_mean, hit10_std) = mean_std(&column(|r| r.hit10));
            let (mrr_mean, mrr_std) = mean_std(&column(|r| r.mrr));
            let (seconds_mean, seconds_std) = mean_std(&column(|r| r.seconds));
            AggregateRecord {
                examples_seen,
                split: first.records[k].split,
                runs: curves.len(),
                hit1_mean,
                hit1_std,
                hit10_mean,
                hit10_std,
                mrr_mean,
                mrr_std,
                seconds_mean,
                seconds_std,
            }
        })
        .collect())
}

/// Labels written next to every CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunLabels {
    pub policy: String,
    pub learner: String,
    pub representation: String,
}

#[derive(Serialize)]
struct RunRow<'a> {
    run_id: usize,
    policy: &'a str,
    learner: &'a str,
    representation: &'a str,
    examples_seen: usize,
    split: Split,
    hit1: f64,
    hit10: f64,
    mrr: f64,
    seconds: f64,
}

/// `run_id,policy,learner,representation,examples_seen,split,hit1,hit10,mrr,seconds`
pub fn write_records_csv(path: &Path, labels: &RunLabels, records: &[EvalRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for r in records {
        w.serialize(RunRow {
            run_id: r.run_id,
            policy: &labels.policy,
            learner: &labels.learner,
            representation: &labels.representation,
            examples_seen: r.examples_seen,
            split: r.split,
            hit1: r.hit1,
            hit10: r.hit10,
            mrr: r.mrr,
            seconds: r.seconds,
        })
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct AggregateRow<'a> {
    policy: &'a str,
    learner: &'a str,
    representation: &'a str,
    examples_seen: usize,
    split: Split,
    runs: usize,
    hit1_mean: f64,
    hit1_std: f64,
    hit10_mean: f64,
    hit10_std: f64,
    mrr_mean: f64,
    mrr_std: f64,
    seconds_mean: f64,
    seconds_std: f64,
}

pub fn write_aggregate_csv(
    path: &Path,
    labels: &RunLabels,
    records: &[AggregateRecord],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for r in records {
        w.serialize(AggregateRow {
            policy: &labels.policy,
            learner: &labels.learner,
            representation: &labels.representation,
            examples_seen: r.examples_seen,
            split: r.split,
            runs: r.runs,
            hit1_mean: r.hit1_mean,
            hit1_std: r.hit1_std,
            hit10_mean: r.hit10_mean,
            hit10_std: r.hit10_std,
            mrr_mean: r.mrr_mean,
            mrr_std: r.mrr_std,
            seconds_mean: r.seconds_mean,
            seconds_std: r.seconds_std,
        })
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_one_two_four() {
        let ranks = [Some(1), Some(2), Some(4)];
        let m = Metrics::from_ranks(&ranks);
        assert_eq!(m.hit1, 1.0 / 3.0);
        assert_eq!(m.hit10, 1.0);
        assert!((m.mrr - 0.583_333_333_333).abs() < 1e-9);
    }

    #[test]
    fn rank_ten_is_a_hit() {
        assert_eq!(hit_at_k(&[Some(10)], 10), 1.0);
        assert_eq!(hit_at_k(&[Some(11)], 10), 0.0);
        assert_eq!(mean_reciprocal_rank(&[None, Some(1)]), 0.5);
    }

    fn rec(run: usize, seen: usize, hit1: f64) -> EvalRecord {
        EvalRecord {
            run_id: run,
            examples_seen: seen,
            split: Split::Validation,
            hit1,
            hit10: hit1,
            mrr: hit1,
            seconds: 0.0,
        }
    }

    #[test]
    fn two_point_std() {
        let a = LearningCurve::try_from(vec![rec(0, 10, 0.10)]).unwrap();
        let b = LearningCurve::try_from(vec![rec(1, 10, 0.20)]).unwrap();
        let agg = aggregate_runs(&[a, b]).unwrap();
        assert!((agg[0].hit1_mean - 0.15).abs() < 1e-15);
        assert!((agg[0].hit1_std - 0.070_710_678).abs() < 1e-8);
    }

    #[test]
    fn identical_curves_have_zero_std() {
        let c = LearningCurve::try_from(vec![rec(0, 1, 0.3), rec(0, 5, 0.6)]).unwrap();
        let agg = aggregate_runs(&[c.clone(), c.clone(), c.clone(), c]).unwrap();
        assert_eq!(
            agg.iter().map(|a| a.hit1_mean).collect::<Vec<_>>(),
            vec![0.3, 0.6]
        );
        assert!(agg.iter().all(|a| a.hit1_std == 0.0));
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = LearningCurve::try_from(vec![rec(0, 1, 0.3)]).unwrap();
        let b = LearningCurve::try_from(vec![rec(1, 2, 0.3)]).unwrap();
        assert!(aggregate_runs(&[a, b]).is_err());
        assert!(aggregate_runs(&[]).is_err());
    }

    #[test]
    fn curve_requires_increasing_checkpoints() {
        let mut c = LearningCurve::new();
        c.push(rec(0, 5, 0.1)).unwrap();
        assert!(c.push(rec(0, 5, 0.1)).is_err());
    }
}
