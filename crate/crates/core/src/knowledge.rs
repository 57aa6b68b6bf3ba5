//! Linking ingredients to a class hierarchy and deriving weighted class properties.
//!
//! Ingredient names are matched lexically against class labels with tf-idf cosine
//! similarity. Each linked class, and its superclasses up to a hop limit, becomes a
//! property of the ingredient weighted by `2^-(hops + 1)`; the lexical match is hop 1.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{IngredientId, Vocabulary};
use crate::error::{Error, Result};

pub const DEFAULT_LINK_THRESHOLD: f64 = 0.6;
pub const DEFAULT_MAX_HOPS: u32 = 5;

/// `2^-(hops + 1)`.
pub fn expressiveness_weight(hops: u32) -> f64 {
    0.5f64.powi(hops as i32 + 1)
}

/// Class labels plus `subClassOf` edges. Cycles are tolerated.
#[derive(Clone, Debug, Default)]
pub struct ClassHierarchy {
    labels: BTreeMap<String, String>,
    parents: BTreeMap<String, BTreeSet<String>>,
}

impl ClassHierarchy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, id: impl Into<String>, label: impl Into<String>) {
        self.labels.insert(id.into(), label.into());
    }

    /// Both ends must already be known classes.
    pub fn add_parent(&mut self, child: &str, parent: &str) -> Result<()> {
        for id in [child, parent] {
            if !self.labels.contains_key(id) {
                return Err(Error::Data(format!("edge references unknown class `{id}`")));
            }
        }
        self.parents
            .entry(child.to_string())
            .or_default()
            .insert(parent.to_string());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: &str) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn classes(&self) -> impl Iterator<Item = (&str, &str)> {
        self.labels.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn parents(&self, id: &str) -> impl Iterator<Item = &str> {
        self.parents
            .get(id)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    /// Reads `class_id<TAB>label` and `class_id<TAB>parent_id` files.
    pub fn load(classes: &Path, edges: &Path) -> Result<Self> {
        let mut h = ClassHierarchy::new();
        for (line, id, label) in read_pairs(classes)? {
            if h.labels.insert(id.clone(), label).is_some() {
                return Err(Error::parse(
                    classes,
                    line,
                    format!("duplicate class `{id}`"),
                ));
            }
        }
        for (line, child, parent) in read_pairs(edges)? {
            h.add_parent(&child, &parent)
                .map_err(|e| Error::parse(edges, line, e.to_string()))?;
        }
        Ok(h)
    }

    pub fn save(&self, classes: &Path, edges: &Path) -> Result<()> {
        let mut c = Vec::new();
        for (id, label) in &self.labels {
            writeln!(c, "{id}\t{label}").expect("write to Vec");
        }
        fs::write(classes, c).map_err(|e| Error::io(classes, e))?;
        let mut e = Vec::new();
        for (child, parents) in &self.parents {
            for p in parents {
                writeln!(e, "{child}\t{p}").expect("write to Vec");
            }
        }
        fs::write(edges, e).map_err(|err| Error::io(edges, err))
    }
}

fn read_pairs(path: &Path) -> Result<Vec<(usize, String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, n + 1, "expected two tab-separated columns"))?;
        rows.push((n + 1, a.trim().to_string(), b.trim().to_string()));
    }
    Ok(rows)
}

/// Lowercase, split on non-alphanumeric characters, no stemming or stop-words.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Which documents contribute to document frequencies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IdfCorpus {
    /// Ingredient names and class labels together.
    #[default]
    NamesAndLabels,
    LabelsOnly,
}

#[derive(Clone, Copy, Debug)]
pub struct LinkOptions {
    /// Links require similarity strictly above this value.
    pub threshold: f64,
    pub corpus: IdfCorpus,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions {
            threshold: DEFAULT_LINK_THRESHOLD,
            corpus: IdfCorpus::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexicalLink {
    pub ingredient: IngredientId,
    pub class: String,
    pub similarity: f64,
}

type TfIdf = Vec<(usize, f64)>;

struct TfIdfModel {
    vocab: HashMap<String, usize>,
    idf: Vec<f64>,
}

impl TfIdfModel {
    fn fit<'a>(docs: impl Iterator<Item = &'a [String]>) -> Self {
        let mut vocab = HashMap::new();
        let mut df: Vec<usize> = Vec::new();
        let mut n = 0usize;
        for doc in docs {
            n += 1;
            let unique: BTreeSet<&String> = doc.iter().collect();
            for t in unique {
                let next = vocab.len();
                let id = *vocab.entry(t.clone()).or_insert(next);
                if id == df.len() {
                    df.push(0);
                }
                df[id] += 1;
            }
        }
        let idf = df
            .iter()
            .map(|&d| ((1.0 + n as f64) / (1.0 + d as f64)).ln() + 1.0)
            .collect();
        TfIdfModel { vocab, idf }
    }

    /// L2-normalized tf-idf vector; tokens outside the fitted vocabulary are ignored.
    fn transform(&self, doc: &[String]) -> TfIdf {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for t in doc {
            if let Some(&id) = self.vocab.get(t) {
                *tf.entry(id).or_insert(0.0) += 1.0;
            }
        }
        let mut v: TfIdf = tf
            .into_iter()
            .map(|(id, c)| (id, c * self.idf[id]))
            .collect();
        let norm = v.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|(_, w)| *w /= norm);
        }
        v
    }
}

/// Links every ingredient to every class whose label is similar enough to its name.
pub fn tfidf_link(
    vocab: &Vocabulary,
    hierarchy: &ClassHierarchy,
    options: LinkOptions,
) -> Vec<LexicalLink> {
    if hierarchy.is_empty() || vocab.is_empty() {
        return Vec::new();
    }
    let names: Vec<Vec<String>> = vocab.names().iter().map(|n| tokenize(n)).collect();
    let class_ids: Vec<&str> = hierarchy.labels.keys().map(String::as_str).collect();
    let labels: Vec<Vec<String>> = hierarchy.labels.values().map(|l| tokenize(l)).collect();

    let model = match options.corpus {
        IdfCorpus::NamesAndLabels => {
            TfIdfModel::fit(names.iter().chain(labels.iter()).map(Vec::as_slice))
        }
        IdfCorpus::LabelsOnly => TfIdfModel::fit(labels.iter().map(Vec::as_slice)),
    };

    // Inverted index over class label vectors.
    let mut postings: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for (c, label) in labels.iter().enumerate() {
        for (term, w) in model.transform(label) {
            postings.entry(term).or_default().push((c, w));
        }
    }

    let per_ingredient: Vec<Vec<LexicalLink>> = names
        .par_iter()
        .enumerate()
        .map(|(i, name)| {
            let mut scores: BTreeMap<usize, f64> = BTreeMap::new();
            for (term, w) in model.transform(name) {
                for &(c, cw) in postings.get(&term).into_iter().flatten() {
                    *scores.entry(c).or_insert(0.0) += w * cw;
                }
            }
            let mut links: Vec<LexicalLink> = scores
                .into_iter()
                .filter(|&(_, s)| s > options.threshold)
                .map(|(c, s)| LexicalLink {
                    ingredient: IngredientId(i as u32),
                    class: class_ids[c].to_string(),
                    similarity: s,
                })
                .collect();
            links.sort_by(|a, b| a.class.cmp(&b.class));
            links
        })
        .collect();
    per_ingredient.into_iter().flatten().collect()
}

/// A weighted class property of one ingredient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyAssignment {
    pub ingredient: IngredientId,
    pub class: String,
    pub hops: u32,
    pub weight: f64,
}

/// Breadth-first superclass ascent from each ingredient's linked classes.
///
/// Linked classes sit at hop 1. When a class is reachable along several paths
/// (or from several links) the smallest hop count wins.
pub fn expand_hops(
    links: &[LexicalLink],
    hierarchy: &ClassHierarchy,
    max_hops: u32,
) -> Vec<PropertyAssignment> {
    assert!(max_hops >= 1, "max_hops must be at least 1");
    let mut by_ingredient: BTreeMap<IngredientId, BTreeSet<&str>> = BTreeMap::new();
    for l in links {
        by_ingredient
            .entry(l.ingredient)
            .or_default()
            .insert(&l.class);
    }

    let mut out = Vec::new();
    for (ingredient, starts) in by_ingredient {
        let mut hops: BTreeMap<&str, u32> = BTreeMap::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        for s in starts {
            hops.insert(s, 1);
            queue.push_back(s);
        }
        while let Some(class) = queue.pop_front() {
            let h = hops[class];
            if h == max_hops {
                continue;
            }
            for parent in hierarchy.parents(class) {
                if !hops.contains_key(parent) {
                    hops.insert(parent, h + 1);
                    queue.push_back(parent);
                }
            }
        }
        out.extend(hops.into_iter().map(|(class, h)| PropertyAssignment {
            ingredient,
            class: class.to_string(),
            hops: h,
            weight: expressiveness_weight(h),
        }));
    }
    out
}

/// Drops classes that describe fewer than two distinct ingredients.
pub fn prune_singletons(assignments: &[PropertyAssignment]) -> Vec<PropertyAssignment> {
    let mut members: HashMap<&str, BTreeSet<IngredientId>> = HashMap::new();
    for a in assignments {
        members.entry(&a.class).or_default().insert(a.ingredient);
    }
    assignments
        .iter()
        .filter(|a| members[a.class.as_str()].len() >= 2)
        .cloned()
        .collect()
}

/// Link, expand, and prune in one go.
pub fn derive_properties(
    vocab: &Vocabulary,
    hierarchy: &ClassHierarchy,
    options: LinkOptions,
    max_hops: u32,
) -> Vec<PropertyAssignment> {
    let links = tfidf_link(vocab, hierarchy, options);
    prune_singletons(&expand_hops(&links, hierarchy, max_hops))
}

/// Writes `ingredient_id<TAB>class_id<TAB>hops<TAB>weight`.
pub fn save_assignments(path: &Path, assignments: &[PropertyAssignment]) -> Result<()> {
    let mut out = Vec::new();
    for a in assignments {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            a.ingredient, a.class, a.hops, a.weight
        )
        .expect("write to Vec");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_assignments(path: &Path) -> Result<Vec<PropertyAssignment>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let bad = |msg: String| Error::parse(path, n + 1, msg);
        let [ingredient, class, hops, weight] = cols[..] else {
            return Err(bad(
                "expected `ingredient_id<TAB>class_id<TAB>hops<TAB>weight`".into(),
            ));
        };
        let ingredient: u32 = ingredient
            .parse()
            .map_err(|_| bad(format!("bad ingredient id `{ingredient}`")))?;
        let hops: u32 = hops
            .parse()
            .map_err(|_| bad(format!("bad hop count `{hops}`")))?;
        let weight: f64 = weight
            .parse()
            .map_err(|_| bad(format!("bad weight `{weight}`")))?;
        if hops == 0 || weight != expressiveness_weight(hops) {
            return Err(bad(format!("weight {weight} does not match {hops} hops")));
        }
        out.push(PropertyAssignment {
            ingredient: IngredientId(ingredient),
            class: class.to_string(),
            hops,
            weight,
        });
    }
    Ok(out)
}
