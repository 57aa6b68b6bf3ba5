//! Incremental learners that rank candidate target ingredients for a query.
//!
//! * **Baseline** counts how often each target replaced each source and ranks by
//!   that count, falling back to global target frequency and then id.
//! * **Prototype** keeps, per observed target, the mean of the query vectors it was
//!   taught with and ranks by similarity to that mean.
//! * **Accumulative** keeps the unnormalized sum instead and ranks by inner product,
//!   so popular targets carry larger vectors.
//!
//! Both vector methods put every observed target ahead of every unobserved one.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{IngredientId, SubstitutionExample};
use crate::error::{Error, Result};
use crate::vector::FeatureVector;

/// Candidates in best-first order with their scores.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    entries: Vec<(IngredientId, f64)>,
}

impl Ranking {
    pub fn entries(&self) -> &[(IngredientId, f64)] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = IngredientId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based position of `id`.
    pub fn rank_of(&self, id: IngredientId) -> Option<usize> {
        self.entries.iter().position(|e| e.0 == id).map(|p| p + 1)
    }
}

/// Common interface of the three methods.
pub trait Learner: Send + Sync {
    fn kind(&self) -> LearnerKind;

    /// Consumes one teaching example. `query` is its encoded query vector.
    fn train_one(&mut self, example: &SubstitutionExample, query: &FeatureVector);

    fn rank(
        &self,
        source: IngredientId,
        query: &FeatureVector,
        candidates: &[IngredientId],
    ) -> Ranking;

    /// Position `target` would take in [`Learner::rank`], without sorting.
    /// `None` if `target` is not a candidate.
    fn target_rank(
        &self,
        source: IngredientId,
        query: &FeatureVector,
        target: IngredientId,
        candidates: &[IngredientId],
    ) -> Option<usize>;

    fn examples_seen(&self) -> u64;

    fn snapshot(&self) -> LearnerSnapshot;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Baseline,
    Prototype,
    Accumulative,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 3] = [
        LearnerKind::Baseline,
        LearnerKind::Prototype,
        LearnerKind::Accumulative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Baseline => "baseline",
            LearnerKind::Prototype => "prototype",
            LearnerKind::Accumulative => "accumulative",
        }
    }

    /// Whether the learner looks at query vectors at all.
    pub fn uses_representation(self) -> bool {
        self != LearnerKind::Baseline
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(LearnerKind::Baseline),
            "prototype" => Ok(LearnerKind::Prototype),
            "accumulative" => Ok(LearnerKind::Accumulative),
            other => Err(Error::Config(format!(
                "unknown learner `{other}` (expected baseline, prototype or accumulative)"
            ))),
        }
    }
}

/// Similarity between a query and a prototype.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Similarity {
    #[default]
    Cosine,
    Dot,
}

impl FromStr for Similarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(Similarity::Cosine),
            "dot" => Ok(Similarity::Dot),
            other => Err(Error::Config(format!(
                "unknown similarity `{other}` (expected cosine or dot)"
            ))),
        }
    }
}

pub fn new_learner(kind: LearnerKind, similarity: Similarity) -> Box<dyn Learner> {
    match kind {
        LearnerKind::Baseline => Box::new(FrequencyState::new()),
        LearnerKind::Prototype => Box::new(VectorLearner::new(VectorMethod::Prototype(similarity))),
        LearnerKind::Accumulative => Box::new(VectorLearner::new(VectorMethod::Accumulative)),
    }
}

// ---------------------------------------------------------------------------
// Baseline

/// Source-target substitution counts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrequencyState {
    pairs: HashMap<IngredientId, HashMap<IngredientId, u64>>,
    targets: HashMap<IngredientId, u64>,
    total: u64,
}

type FrequencyKey = (Reverse<u64>, Reverse<u64>, IngredientId);

impl FrequencyState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, source: IngredientId, target: IngredientId) {
        *self
            .pairs
            .entry(source)
            .or_default()
            .entry(target)
            .or_insert(0) += 1;
        *self.targets.entry(target).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn pair_count(&self, source: IngredientId, target: IngredientId) -> u64 {
        self.pairs
            .get(&source)
            .and_then(|m| m.get(&target))
            .copied()
            .unwrap_or(0)
    }

    pub fn target_count(&self, target: IngredientId) -> u64 {
        self.targets.get(&target).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_observed(&self, target: IngredientId) -> bool {
        self.targets.contains_key(&target)
    }

    fn keyer(&self, source: IngredientId) -> impl Fn(IngredientId) -> FrequencyKey + '_ {
        let row = self.pairs.get(&source);
        move |c| {
            let pair = row.and_then(|m| m.get(&c)).copied().unwrap_or(0);
            (Reverse(pair), Reverse(self.target_count(c)), c)
        }
    }

    /// Sorted by pair count, then global target count (both descending), then id.
    pub fn rank_baseline(&self, source: IngredientId, candidates: &[IngredientId]) -> Ranking {
        let key = self.keyer(source);
        let mut keyed: Vec<FrequencyKey> = candidates.iter().map(|&c| key(c)).collect();
        keyed.sort_unstable();
        Ranking {
            entries: keyed
                .into_iter()
                .map(|(Reverse(p), _, c)| (c, p as f64))
                .collect(),
        }
    }
}

impl Learner for FrequencyState {
    fn kind(&self) -> LearnerKind {
        LearnerKind::Baseline
    }

    fn train_one(&mut self, example: &SubstitutionExample, _query: &FeatureVector) {
        self.observe(example.source, example.target);
    }

    fn rank(
        &self,
        source: IngredientId,
        _query: &FeatureVector,
        candidates: &[IngredientId],
    ) -> Ranking {
        self.rank_baseline(source, candidates)
    }

    fn target_rank(
        &self,
        source: IngredientId,
        _query: &FeatureVector,
        target: IngredientId,
        candidates: &[IngredientId],
    ) -> Option<usize> {
        let key = self.keyer(source);
        let pivot = key(target);
        let mut ahead = 0;
        let mut present = false;
        for &c in candidates {
            if c == target {
                present = true;
            } else if key(c) < pivot {
                ahead += 1;
            }
        }
        present.then_some(ahead + 1)
    }

    fn examples_seen(&self) -> u64 {
        self.total
    }

    fn snapshot(&self) -> LearnerSnapshot {
        let mut pairs: Vec<(IngredientId, IngredientId, u64)> = self
            .pairs
            .iter()
            .flat_map(|(&s, row)| row.iter().map(move |(&t, &c)| (s, t, c)))
            .collect();
        pairs.sort_unstable();
        LearnerSnapshot::new(SnapshotBody::Baseline { pairs })
    }
}

// ---------------------------------------------------------------------------
// Vector methods

#[derive(Clone, Debug, PartialEq)]
struct TargetAccumulator {
    sum: FeatureVector,
    count: u64,
    norm: f64,
}

/// Per-target sums of observed query vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorState {
    slots: Vec<Option<TargetAccumulator>>,
    observed: usize,
    total: u64,
}

impl VectorState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, target: IngredientId, query: &FeatureVector) {
        if self.slots.len() <= target.index() {
            self.slots.resize(target.index() + 1, None);
        }
        match &mut self.slots[target.index()] {
            Some(acc) => {
                acc.sum.add_assign(query);
                acc.count += 1;
                acc.norm = acc.sum.norm();
            }
            slot @ None => {
                let mut sum = query.zeros_like();
                sum.add_assign(query);
                let norm = sum.norm();
                *slot = Some(TargetAccumulator {
                    sum,
                    count: 1,
                    norm,
                });
                self.observed += 1;
            }
        }
        self.total += 1;
    }

    fn slot(&self, target: IngredientId) -> Option<&TargetAccumulator> {
        self.slots.get(target.index()).and_then(Option::as_ref)
    }

    /// Sum of the query vectors observed for `target`.
    pub fn acc(&self, target: IngredientId) -> Option<&FeatureVector> {
        self.slot(target).map(|a| &a.sum)
    }

    pub fn count(&self, target: IngredientId) -> u64 {
        self.slot(target).map_or(0, |a| a.count)
    }

    /// Mean of the observed query vectors, derived on demand.
    pub fn prototype(&self, target: IngredientId) -> Option<FeatureVector> {
        self.slot(target)
            .map(|a| a.sum.scaled(1.0 / a.count as f64))
    }

    pub fn observed_targets(&self) -> impl Iterator<Item = IngredientId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| IngredientId(i as u32))
    }

    pub fn n_observed(&self) -> usize {
        self.observed
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Score of an observed target; `None` for unobserved ones.
    pub fn score(
        &self,
        query: &FeatureVector,
        target: IngredientId,
        method: VectorMethod,
    ) -> Option<f64> {
        let acc = self.slot(target)?;
        let dot = query.dot(&acc.sum);
        Some(match method {
            VectorMethod::Accumulative => dot,
            VectorMethod::Prototype(Similarity::Dot) => dot / acc.count as f64,
            VectorMethod::Prototype(Similarity::Cosine) => {
                let count = acc.count as f64;
                let denom = query.norm() * (acc.norm / count);
                if denom == 0.0 {
                    0.0
                } else {
                    (dot / count) / denom
                }
            }
        })
    }

    /// Observed targets first by descending score, then unobserved ones; ties by id.
    pub fn rank_vector(
        &self,
        query: &FeatureVector,
        candidates: &[IngredientId],
        method: VectorMethod,
    ) -> Ranking {
        let mut keyed: Vec<(Option<f64>, IngredientId)> = candidates
            .iter()
            .map(|&c| (self.score(query, c, method), c))
            .collect();
        keyed.sort_unstable_by(|a, b| compare_vector_keys(*a, *b));
        Ranking {
            entries: keyed
                .into_iter()
                .map(|(s, c)| (c, s.unwrap_or(0.0)))
                .collect(),
        }
    }
}

fn compare_vector_keys(a: (Option<f64>, IngredientId), b: (Option<f64>, IngredientId)) -> Ordering {
    match (a.0, b.0) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.1.cmp(&b.1)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.1.cmp(&b.1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectorMethod {
    Prototype(Similarity),
    Accumulative,
}

#[derive(Clone, Debug)]
pub struct VectorLearner {
    pub state: VectorState,
    pub method: VectorMethod,
}

impl VectorLearner {
    pub fn new(method: VectorMethod) -> Self {
        VectorLearner {
            state: VectorState::new(),
            method,
        }
    }
}

impl Learner for VectorLearner {
    fn kind(&self) -> LearnerKind {
        match self.method {
            VectorMethod::Prototype(_) => LearnerKind::Prototype,
            VectorMethod::Accumulative => LearnerKind::Accumulative,
        }
    }

    fn train_one(&mut self, example: &SubstitutionExample, query: &FeatureVector) {
        self.state.observe(example.target, query);
    }

    fn rank(
        &self,
        _source: IngredientId,
        query: &FeatureVector,
        candidates: &[IngredientId],
    ) -> Ranking {
        self.state.rank_vector(query, candidates, self.method)
    }

    fn target_rank(
        &self,
        _source: IngredientId,
        query: &FeatureVector,
        target: IngredientId,
        candidates: &[IngredientId],
    ) -> Option<usize> {
        let pivot = (self.state.score(query, target, self.method), target);
        let mut ahead = 0;
        let mut present = false;
        for &c in candidates {
            if c == target {
                present = true;
                continue;
            }
            // Unobserved candidates can only precede an unobserved target.
            let key = match self.state.slot(c) {
                None if pivot.0.is_some() => continue,
                None => (None, c),
                Some(_) => (self.state.score(query, c, self.method), c),
            };
            if compare_vector_keys(key, pivot) == Ordering::Less {
                ahead += 1;
            }
        }
        present.then_some(ahead + 1)
    }

    fn examples_seen(&self) -> u64 {
        self.state.total
    }

    fn snapshot(&self) -> LearnerSnapshot {
        let targets = self
            .state
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                s.as_ref().map(|a| TargetSnapshot {
                    target: IngredientId(i as u32),
                    count: a.count,
                    sum: a.sum.clone(),
                })
            })
            .collect();
        let body = match self.method {
            VectorMethod::Accumulative => SnapshotBody::Accumulative { targets },
            VectorMethod::Prototype(similarity) => SnapshotBody::Prototype {
                similarity,
                targets,
            },
        };
        LearnerSnapshot::new(body)
    }
}

// ---------------------------------------------------------------------------
// Snapshots

pub const SNAPSHOT_FORMAT: &str = "subteach-learner";
pub const SNAPSHOT_VERSION: u32 = 1;

/// JSON checkpoint of a learner's state.
///
/// ```text
/// {"format":"subteach-learner","version":1,"learner":"baseline","pairs":[[source,target,count],...]}
/// {"format":"subteach-learner","version":1,"learner":"accumulative","targets":[{"target":t,"count":n,"sum":{...}}]}
/// {"format":"subteach-learner","version":1,"learner":"prototype","similarity":"cosine","targets":[...]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerSnapshot {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub body: SnapshotBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "lowercase")]
pub enum SnapshotBody {
    Baseline {
        pairs: Vec<(IngredientId, IngredientId, u64)>,
    },
    Prototype {
        similarity: Similarity,
        targets: Vec<TargetSnapshot>,
    },
    Accumulative {
        targets: Vec<TargetSnapshot>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSnapshot {
    pub target: IngredientId,
    pub count: u64,
    pub sum: FeatureVector,
}

impl LearnerSnapshot {
    fn new(body: SnapshotBody) -> Self {
        LearnerSnapshot {
            format: SNAPSHOT_FORMAT.to_string(),
            version: SNAPSHOT_VERSION,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let snap: LearnerSnapshot = serde_json::from_str(text)
            .map_err(|e| Error::Data(format!("bad learner snapshot: {e}")))?;
        if snap.format != SNAPSHOT_FORMAT || snap.version != SNAPSHOT_VERSION {
            return Err(Error::Data(format!(
                "unsupported snapshot {} v{} (expected {SNAPSHOT_FORMAT} v{SNAPSHOT_VERSION})",
                snap.format, snap.version
            )));
        }
        Ok(snap)
    }

    pub fn restore(&self) -> Result<Box<dyn Learner>> {
        match &self.body {
            SnapshotBody::Baseline { pairs } => {
                let mut state = FrequencyState::new();
                for &(s, t, c) in pairs {
                    if c == 0 {
                        return Err(Error::Data("zero pair count in snapshot".into()));
                    }
                    *state.pairs.entry(s).or_default().entry(t).or_insert(0) += c;
                    *state.targets.entry(t).or_insert(0) += c;
                    state.total += c;
                }
                Ok(Box::new(state))
            }
            SnapshotBody::Prototype {
                similarity,
                targets,
            } => restore_vector(VectorMethod::Prototype(*similarity), targets),
            SnapshotBody::Accumulative { targets } => {
                restore_vector(VectorMethod::Accumulative, targets)
            }
        }
    }
}

fn restore_vector(method: VectorMethod, targets: &[TargetSnapshot]) -> Result<Box<dyn Learner>> {
    let mut learner = VectorLearner::new(method);
    let mut seen = BTreeMap::new();
    for t in targets {
        if t.count == 0 || seen.insert(t.target, ()).is_some() || !t.sum.is_finite() {
            return Err(Error::Data(format!(
                "invalid snapshot entry for target {}",
                t.target
            )));
        }
        let state = &mut learner.state;
        if state.slots.len() <= t.target.index() {
            state.slots.resize(t.target.index() + 1, None);
        }
        state.slots[t.target.index()] = Some(TargetAccumulator {
            norm: t.sum.norm(),
            sum: t.sum.clone(),
            count: t.count,
        });
        state.observed += 1;
        state.total += t.count;
    }
    Ok(Box::new(learner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::SparseVector;

    fn id(i: u32) -> IngredientId {
        IngredientId(i)
    }

    fn all(n: u32) -> Vec<IngredientId> {
        (0..n).map(IngredientId).collect()
    }

    fn e(i: u32, dim: usize) -> FeatureVector {
        SparseVector::from_pairs(dim, [(i, 1.0)]).into()
    }

    fn example(s: u32, t: u32) -> SubstitutionExample {
        SubstitutionExample::new([id(s), id(99)], id(s), id(t)).unwrap()
    }

    #[test]
    fn baseline_counts_and_order() {
        let (butter, oil, margarine) = (0, 1, 2);
        let mut f = FrequencyState::new();
        for _ in 0..3 {
            f.observe(id(butter), id(oil));
        }
        f.observe(id(butter), id(margarine));
        assert_eq!(f.pair_count(id(butter), id(oil)), 3);
        assert_eq!(f.pair_count(id(butter), id(margarine)), 1);
        let r = f.rank_baseline(id(butter), &all(5));
        assert_eq!(r.rank_of(id(oil)), Some(1));
        assert_eq!(r.rank_of(id(margarine)), Some(2));
    }

    #[test]
    fn baseline_unseen_source_falls_back_to_target_frequency() {
        let mut f = FrequencyState::new();
        f.observe(id(0), id(3));
        f.observe(id(1), id(3));
        f.observe(id(1), id(2));
        let r = f.rank_baseline(id(4), &all(5));
        assert_eq!(
            r.ids().collect::<Vec<_>>(),
            vec![id(3), id(2), id(0), id(1), id(4)]
        );
    }

    #[test]
    fn baseline_empty_state_is_id_order() {
        let r = FrequencyState::new().rank_baseline(id(2), &all(4));
        assert_eq!(r.ids().collect::<Vec<_>>(), all(4));
    }

    #[test]
    fn accumulative_sums_queries() {
        let mut v = VectorLearner::new(VectorMethod::Accumulative);
        v.train_one(&example(0, 5), &e(0, 8));
        v.train_one(&example(1, 5), &e(1, 8));
        assert_eq!(
            v.state.acc(id(5)).unwrap().to_dense(),
            vec![1., 1., 0., 0., 0., 0., 0., 0.]
        );
        assert_eq!(v.state.count(id(5)), 2);
    }

    #[test]
    fn accumulative_score_counts_pairs() {
        let (a, x, y) = (0, 1, 2);
        let mut v = VectorLearner::new(VectorMethod::Accumulative);
        for _ in 0..3 {
            v.train_one(&example(a, x), &e(a, 6));
        }
        v.train_one(&example(a, y), &e(a, 6));
        let q = e(a, 6);
        let r = v.rank(id(a), &q, &all(6));
        assert_eq!(r.entries()[0], (id(x), 3.0));
        assert_eq!(r.entries()[1], (id(y), 1.0));
        assert_eq!(
            r.ids().skip(2).collect::<Vec<_>>(),
            vec![id(0), id(3), id(4), id(5)]
        );
    }

    #[test]
    fn prototype_self_similarity_is_one() {
        let mut v = VectorLearner::new(VectorMethod::Prototype(Similarity::Cosine));
        let q1: FeatureVector = SparseVector::from_pairs(4, [(0, 0.9), (1, 0.1)]).into();
        let q2: FeatureVector = SparseVector::from_pairs(4, [(0, 0.9), (2, 0.1)]).into();
        v.train_one(&example(0, 3), &q1);
        v.train_one(&example(0, 3), &q2);
        let proto = v.state.prototype(id(3)).unwrap();
        let s = v.state.score(&proto, id(3), v.method).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(v.rank(id(0), &proto, &all(4)).rank_of(id(3)), Some(1));
    }

    #[test]
    fn zero_query_with_cosine_scores_zero() {
        let mut v = VectorLearner::new(VectorMethod::Prototype(Similarity::Cosine));
        v.train_one(&example(0, 1), &e(0, 3));
        let zero: FeatureVector = SparseVector::zeros(3).into();
        assert_eq!(v.state.score(&zero, id(1), v.method), Some(0.0));
    }

    #[test]
    fn target_rank_matches_full_ranking() {
        let mut v = VectorLearner::new(VectorMethod::Accumulative);
        v.train_one(&example(0, 2), &e(0, 6));
        v.train_one(&example(1, 4), &e(1, 6));
        let q = e(1, 6);
        let cands = all(6);
        let full = v.rank(id(1), &q, &cands);
        for t in cands.iter().copied() {
            assert_eq!(v.target_rank(id(1), &q, t, &cands), full.rank_of(t));
        }
        assert_eq!(v.target_rank(id(1), &q, id(9), &cands), None);
    }

    #[test]
    fn snapshot_roundtrip() {
        let mut b = FrequencyState::new();
        b.observe(id(0), id(1));
        b.observe(id(0), id(1));
        b.observe(id(2), id(1));
        let restored = LearnerSnapshot::from_json(&b.snapshot().to_json())
            .unwrap()
            .restore()
            .unwrap();
        assert_eq!(restored.snapshot(), b.snapshot());
        assert_eq!(restored.examples_seen(), 3);

        let mut v = VectorLearner::new(VectorMethod::Prototype(Similarity::Dot));
        v.train_one(&example(0, 1), &FeatureVector::dense(vec![0.5, 0.25]));
        let text = v.snapshot().to_json();
        let restored = LearnerSnapshot::from_json(&text)
            .unwrap()
            .restore()
            .unwrap();
        assert_eq!(restored.kind(), LearnerKind::Prototype);
        assert_eq!(restored.snapshot().to_json(), text);

        let bumped = text.replace("\"version\":1", "\"version\":2");
        assert!(LearnerSnapshot::from_json(&bumped).is_err());
    }
}
