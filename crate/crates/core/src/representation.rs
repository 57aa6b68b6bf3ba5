//! Ingredient feature vectors and substitution-query composition.
//!
//! A query `(recipe, source)` is encoded as
//! `source_weight · ŝ + (1 − source_weight) · r̂`, where `r̂` is the sum of the
//! remaining ingredients' vectors weighted by their normalized descriptive weights
//! (inverse recipe-occurrence counts, rescaled to sum to one within the recipe).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{IngredientId, SubstitutionExample, Vocabulary};
use crate::error::{Error, Result};
use crate::knowledge::PropertyAssignment;
use crate::vector::{FeatureVector, SparseVector};

pub const DEFAULT_SOURCE_WEIGHT: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReprMode {
    OneHot,
    OneHotKg,
    Dense,
}

impl ReprMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReprMode::OneHot => "one_hot",
            ReprMode::OneHotKg => "one_hot_kg",
            ReprMode::Dense => "dense",
        }
    }
}

impl fmt::Display for ReprMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReprMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_hot" => Ok(ReprMode::OneHot),
            "one_hot_kg" => Ok(ReprMode::OneHotKg),
            "dense" => Ok(ReprMode::Dense),
            other => Err(Error::Config(format!(
                "unknown representation `{other}` (expected one_hot, one_hot_kg or dense)"
            ))),
        }
    }
}

/// Per-ingredient vectors for one representation mode.
#[derive(Clone, Debug)]
pub struct RepresentationProvider {
    mode: ReprMode,
    dim: usize,
    vectors: Vec<FeatureVector>,
    /// Class id for each dimension of the knowledge block (`one_hot_kg` only).
    class_dims: Vec<String>,
}

impl RepresentationProvider {
    /// Dispatches on `mode`; assignments are required for `one_hot_kg` and an
    /// embedding file for `dense`, and neither is accepted otherwise.
    pub fn build(
        mode: ReprMode,
        vocab: &Vocabulary,
        assignments: Option<&[PropertyAssignment]>,
        embedding_file: Option<&Path>,
    ) -> Result<Self> {
        match (mode, assignments, embedding_file) {
            (ReprMode::OneHot, None, None) => Ok(Self::one_hot(vocab)),
            (ReprMode::OneHotKg, Some(a), None) => Self::one_hot_kg(vocab, a),
            (ReprMode::Dense, None, Some(path)) => Self::dense_from_file(vocab, path),
            (ReprMode::OneHotKg, None, _) => {
                Err(Error::Config("one_hot_kg needs class assignments".into()))
            }
            (ReprMode::Dense, _, None) => {
                Err(Error::Config("dense mode needs an embedding file".into()))
            }
            (mode, _, _) => Err(Error::Config(format!(
                "unexpected inputs for representation `{mode}`"
            ))),
        }
    }

    pub fn one_hot(vocab: &Vocabulary) -> Self {
        let dim = vocab.len();
        let vectors = vocab
            .ids()
            .map(|i| SparseVector::from_pairs(dim, [(i.0, 1.0)]).into())
            .collect();
        RepresentationProvider {
            mode: ReprMode::OneHot,
            dim,
            vectors,
            class_dims: Vec::new(),
        }
    }

    /// 1-hot block followed by one dimension per class appearing in `assignments`,
    /// ordered by class id. If an (ingredient, class) pair repeats, the smallest hop count wins.
    pub fn one_hot_kg(vocab: &Vocabulary, assignments: &[PropertyAssignment]) -> Result<Self> {
        let n = vocab.len();
        let class_dims: Vec<String> = assignments
            .iter()
            .map(|a| a.class.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let class_index: HashMap<&str, u32> = class_dims
            .iter()
            .enumerate()
            .map(|(k, c)| (c.as_str(), (n + k) as u32))
            .collect();
        let dim = n + class_dims.len();

        let mut props: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); n];
        for a in assignments {
            if a.ingredient.index() >= n {
                return Err(Error::Data(format!(
                    "class assignment for ingredient {} outside vocabulary of {n}",
                    a.ingredient
                )));
            }
            let slot = props[a.ingredient.index()]
                .entry(class_index[a.class.as_str()])
                .or_insert(0.0);
            *slot = slot.max(a.weight);
        }
        let vectors = props
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                SparseVector::from_pairs(dim, std::iter::once((i as u32, 1.0)).chain(p)).into()
            })
            .collect();
        Ok(RepresentationProvider {
            mode: ReprMode::OneHotKg,
            dim,
            vectors,
            class_dims,
        })
    }

    /// Loads a word2vec-style text file: a `count dim` header, then `name v1 … vdim` rows.
    ///
    /// Rows naming ingredients outside the vocabulary are skipped; every vocabulary
    /// ingredient must have a row.
    pub fn dense_from_file(vocab: &Vocabulary, path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing `count dim` header"))?;
        let header: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(path, 1, "bad `count dim` header"))
            })
            .collect::<Result<_>>()?;
        let [count, dim] = header[..] else {
            return Err(Error::parse(path, 1, "header must be `count dim`"));
        };

        let mut vectors: Vec<Option<FeatureVector>> = vec![None; vocab.len()];
        let mut rows = 0;
        for (n, line) in lines {
            rows += 1;
            let mut parts = line.split_whitespace();
            let name = parts.next().expect("non-empty line");
            let values: Vec<f64> = parts
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::parse(path, n + 1, format!("bad value `{t}`")))
                })
                .collect::<Result<_>>()?;
            if values.len() != dim {
                return Err(Error::parse(
                    path,
                    n + 1,
                    format!(
                        "dimension mismatch: expected {dim} values, found {}",
                        values.len()
                    ),
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::parse(path, n + 1, "non-finite value"));
            }
            if let Some(id) = vocab.resolve(name) {
                if vectors[id.index()]
                    .replace(FeatureVector::dense(values))
                    .is_some()
                {
                    return Err(Error::parse(
                        path,
                        n + 1,
                        format!("duplicate row for `{name}`"),
                    ));
                }
            }
        }
        if rows != count {
            return Err(Error::parse(
                path,
                1,
                format!("header announces {count} rows, found {rows}"),
            ));
        }
        let missing: Vec<&str> = vocab
            .ids()
            .filter(|i| vectors[i.index()].is_none())
            .map(|i| vocab.name(i))
            .collect();
        if !missing.is_empty() {
            let shown = missing
                .iter()
                .take(20)
                .copied()
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::Data(format!(
                "{}: {} vocabulary ingredients have no vector: {shown}",
                path.display(),
                missing.len()
            )));
        }
        Ok(RepresentationProvider {
            mode: ReprMode::Dense,
            dim,
            vectors: vectors
                .into_iter()
                .map(|v| v.expect("checked above"))
                .collect(),
            class_dims: Vec::new(),
        })
    }

    /// Wraps precomputed dense vectors, one per ingredient in id order.
    pub fn from_dense_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::Data("dense vectors of unequal length".into()));
        }
        Ok(RepresentationProvider {
            mode: ReprMode::Dense,
            dim,
            vectors: vectors.into_iter().map(FeatureVector::dense).collect(),
            class_dims: Vec::new(),
        })
    }

    pub fn mode(&self) -> ReprMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn class_dims(&self) -> &[String] {
        &self.class_dims
    }

    pub fn vector(&self, id: IngredientId) -> Option<&FeatureVector> {
        self.vectors.get(id.index())
    }
}

/// What to do with ingredients that never occur in the recipe corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnseenPolicy {
    /// Give them the largest observed weight, i.e. treat them as maximally rare.
    #[default]
    MaxObserved,
    Error,
}

impl FromStr for UnseenPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_observed" => Ok(UnseenPolicy::MaxObserved),
            "error" => Ok(UnseenPolicy::Error),
            other => Err(Error::Config(format!("unknown unseen_weights `{other}`"))),
        }
    }
}

/// Inverse recipe-occurrence counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DescriptiveWeights {
    counts: Vec<u32>,
    weights: Vec<f64>,
    unseen: Vec<IngredientId>,
}

impl DescriptiveWeights {
    /// Counts each ingredient at most once per recipe over `recipes`.
    pub fn compute<R, I>(recipes: R, n_ingredients: usize, policy: UnseenPolicy) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = IngredientId>,
    {
        let mut counts = vec![0u32; n_ingredients];
        let mut any = false;
        for recipe in recipes {
            any = true;
            let unique: BTreeSet<IngredientId> = recipe.into_iter().collect();
            for i in unique {
                let slot = counts.get_mut(i.index()).ok_or_else(|| {
                    Error::Data(format!("recipe ingredient {i} outside vocabulary"))
                })?;
                *slot += 1;
            }
        }
        if !any {
            return Err(Error::Data(
                "descriptive weights need a non-empty recipe corpus".into(),
            ));
        }
        let unseen: Vec<IngredientId> = (0..n_ingredients as u32)
            .map(IngredientId)
            .filter(|i| counts[i.index()] == 0)
            .collect();
        if policy == UnseenPolicy::Error && !unseen.is_empty() {
            return Err(Error::Data(format!(
                "{} ingredients never occur in the recipe corpus (first: {})",
                unseen.len(),
                unseen[0]
            )));
        }
        let max_observed = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| 1.0 / c as f64)
            .fold(0.0, f64::max);
        let weights = counts
            .iter()
            .map(|&c| if c == 0 { max_observed } else { 1.0 / c as f64 })
            .collect();
        Ok(DescriptiveWeights {
            counts,
            weights,
            unseen,
        })
    }

    pub fn count(&self, id: IngredientId) -> u32 {
        self.counts[id.index()]
    }

    pub fn weight(&self, id: IngredientId) -> Option<f64> {
        self.weights.get(id.index()).copied()
    }

    /// Ingredients absent from the corpus.
    pub fn unseen(&self) -> &[IngredientId] {
        &self.unseen
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        DescriptiveWeights {
            counts: self.counts.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            unseen: self.unseen.clone(),
        }
    }
}

/// Normalized descriptive weights of the remaining ingredients, in ascending id order.
pub fn normalized_context_weights(
    example: &SubstitutionExample,
    weights: &DescriptiveWeights,
) -> Result<Vec<(IngredientId, f64)>> {
    let raw: Vec<(IngredientId, f64)> = example
        .remaining()
        .map(|i| {
            weights
                .weight(i)
                .map(|w| (i, w))
                .ok_or_else(|| Error::Data(format!("no descriptive weight for ingredient {i}")))
        })
        .collect::<Result<_>>()?;
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    Ok(raw.into_iter().map(|(i, w)| (i, w / total)).collect())
}

/// `source_weight · ŝ + (1 − source_weight) · Σ d′ᵢ îᵢ` over the remaining ingredients.
pub fn query_representation(
    example: &SubstitutionExample,
    provider: &RepresentationProvider,
    weights: &DescriptiveWeights,
    source_weight: f64,
) -> Result<FeatureVector> {
    let lookup = |i: IngredientId| {
        provider
            .vector(i)
            .ok_or_else(|| Error::Data(format!("ingredient {i} has no vector")))
    };
    let source = lookup(example.source)?;
    let context_share = 1.0 - source_weight;
    let mut terms = vec![(source_weight, source)];
    if context_share != 0.0 {
        for (i, d) in normalized_context_weights(example, weights)? {
            terms.push((context_share * d, lookup(i)?));
        }
    }
    Ok(FeatureVector::weighted_sum(provider.dim(), terms))
}

/// Bundles everything needed to turn examples into query vectors.
#[derive(Clone, Debug)]
pub struct QueryEncoder {
    pub provider: RepresentationProvider,
    pub weights: DescriptiveWeights,
    pub source_weight: f64,
}

impl QueryEncoder {
    pub fn encode(&self, example: &SubstitutionExample) -> Result<FeatureVector> {
        query_representation(example, &self.provider, &self.weights, self.source_weight)
    }

    pub fn encode_all(&self, examples: &[SubstitutionExample]) -> Result<Vec<FeatureVector>> {
        use rayon::prelude::*;
        examples.par_iter().map(|e| self.encode(e)).collect()
    }
}
