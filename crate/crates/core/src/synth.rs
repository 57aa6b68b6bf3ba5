//! Synthetic substitution datasets with a known ground truth.
//!
//! Ingredients are partitioned into groups. Each ground-truth rule maps a source to a
//! target, and all sources that share a target come from the same group, so a class
//! hierarchy mirroring the groups gives real signal to knowledge-enriched
//! representations. Every source has exactly one correct target.
//!
//! Generated hierarchy, per ingredient `group_variant`:
//!
//! ```text
//! leaf class "group variant"  ->  group class "group"  ->  supergroup  ->  root "food product"
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, IngredientId, SubstitutionExample, Vocabulary};
use crate::error::{Error, Result};
use crate::knowledge::ClassHierarchy;

const GROUP_WORDS: &[&str] = &[
    "dairy",
    "grain",
    "fruit",
    "nut",
    "herb",
    "fat",
    "sweetener",
    "spice",
    "legume",
    "vegetable",
    "meat",
    "fish",
    "shellfish",
    "sauce",
    "vinegar",
    "cheese",
    "bread",
    "pasta",
    "mushroom",
    "tuber",
    "seed",
    "wine",
    "liquor",
    "tea",
    "broth",
    "starch",
    "egg",
    "citrus",
    "berry",
    "pepper",
];
const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aeiou";
const MIN_RECIPE: usize = 3;
const MAX_RECIPE: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_ingredients: usize,
    /// Number of ingredient groups, each backed by one group class.
    pub n_classes: usize,
    pub n_recipes: usize,
    pub n_examples: usize,
    /// Ground-truth `(source, target)` pairs.
    pub n_rules: usize,
    /// Zipf exponent of rule popularity.
    pub skew: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_ingredients: 50,
            n_classes: 10,
            n_recipes: 200,
            n_examples: 2858,
            n_rules: 20,
            skew: 1.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_ingredients", self.n_ingredients),
            ("n_classes", self.n_classes),
            ("n_recipes", self.n_recipes),
            ("n_examples", self.n_examples),
            ("n_rules", self.n_rules),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if !(self.skew >= 0.0 && self.skew.is_finite()) {
            return Err(Error::Config(format!(
                "skew must be a finite value >= 0, got {}",
                self.skew
            )));
        }
        if self.n_ingredients < 2 {
            return Err(Error::Config("need at least two ingredients".into()));
        }
        if self.n_classes > self.n_ingredients {
            return Err(Error::Config("more classes than ingredients".into()));
        }
        let pairs = self.n_ingredients * (self.n_ingredients - 1);
        if self.n_rules > pairs {
            return Err(Error::Config(format!(
                "{} rules exceed the {pairs} possible ingredient pairs",
                self.n_rules
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub source: IngredientId,
    pub target: IngredientId,
    /// Sampling probability of this rule.
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct SynthData {
    pub vocab: Vocabulary,
    pub dataset: Dataset,
    pub hierarchy: ClassHierarchy,
    pub rules: Vec<Rule>,
    /// Group index of each ingredient.
    pub groups: Vec<usize>,
}

/// Paths written by [`SynthData::write_files`].
#[derive(Clone, Debug)]
pub struct SynthFiles {
    pub vocab: PathBuf,
    pub dataset: PathBuf,
    pub classes: PathBuf,
    pub edges: PathBuf,
    pub rules: PathBuf,
}

impl SynthFiles {
    pub fn in_dir(dir: &Path) -> Self {
        SynthFiles {
            vocab: dir.join("vocab.tsv"),
            dataset: dir.join("dataset.jsonl"),
            classes: dir.join("classes.tsv"),
            edges: dir.join("edges.tsv"),
            rules: dir.join("rules.tsv"),
        }
    }
}

impl SynthData {
    pub fn write_files(&self, dir: &Path) -> Result<SynthFiles> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let files = SynthFiles::in_dir(dir);
        self.vocab.save(&files.vocab)?;
        self.dataset.save(&files.dataset, &self.vocab)?;
        self.hierarchy.save(&files.classes, &files.edges)?;
        let mut out = Vec::new();
        for r in &self.rules {
            writeln!(
                out,
                "{}\t{}\t{}",
                self.vocab.name(r.source),
                self.vocab.name(r.target),
                r.probability
            )
            .expect("write to Vec");
        }
        fs::write(&files.rules, out).map_err(|e| Error::io(&files.rules, e))?;
        Ok(files)
    }

    /// The ground-truth target of `source`, if it is a rule source.
    pub fn target_of(&self, source: IngredientId) -> Option<IngredientId> {
        self.rules
            .iter()
            .find(|r| r.source == source)
            .map(|r| r.target)
    }
}

fn syllable(k: usize) -> String {
    let c = CONSONANTS[k % CONSONANTS.len()] as char;
    let v = VOWELS[(k / CONSONANTS.len()) % VOWELS.len()] as char;
    format!("{c}{v}")
}

/// A unique pronounceable token for every `k`.
fn variant_word(k: usize) -> String {
    let base = CONSONANTS.len() * VOWELS.len();
    let mut word = syllable(k % base) + &syllable((k / base) % base);
    let mut rest = k / (base * base);
    while rest > 0 {
        word += &syllable(rest % base);
        rest /= base;
    }
    word
}

fn group_word(g: usize) -> String {
    let w = GROUP_WORDS[g % GROUP_WORDS.len()];
    match g / GROUP_WORDS.len() {
        0 => w.to_string(),
        n => format!("{w}{n}"),
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthData> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_ingredients;

    // Groups.
    let mut shuffled: Vec<usize> = (0..n).collect();
    shuffled.shuffle(&mut rng);
    let mut groups = vec![0usize; n];
    for (pos, &i) in shuffled.iter().enumerate() {
        groups[i] = pos % config.n_classes;
    }
    let group_words: Vec<String> = (0..config.n_classes).map(group_word).collect();
    let names: Vec<String> = (0..n)
        .map(|i| format!("{}_{}", group_words[groups[i]], variant_word(i)))
        .collect();
    let vocab = Vocabulary::from_names(&names)?;

    // Hierarchy.
    let mut hierarchy = ClassHierarchy::new();
    let n_super = (config.n_classes / 4).max(1);
    hierarchy.add_class("C_ROOT", "food product");
    for s in 0..n_super {
        hierarchy.add_class(format!("C_SUPER_{s:03}"), format!("supergroup{s}"));
        hierarchy.add_parent(&format!("C_SUPER_{s:03}"), "C_ROOT")?;
    }
    for (g, word) in group_words.iter().enumerate() {
        let id = format!("C_GROUP_{g:03}");
        hierarchy.add_class(&id, word.as_str());
        hierarchy.add_parent(&id, &format!("C_SUPER_{:03}", g % n_super))?;
    }
    for i in 0..n {
        let id = format!("C_LEAF_{i:05}");
        hierarchy.add_class(
            &id,
            format!("{} {}", group_words[groups[i]], variant_word(i)),
        );
        hierarchy.add_parent(&id, &format!("C_GROUP_{:03}", groups[i]))?;
    }

    // Rules: each group of sources shares one target drawn from another group.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); config.n_classes];
    for &i in &shuffled {
        members[groups[i]].push(i);
    }
    let mut group_order: Vec<usize> = (0..config.n_classes).collect();
    group_order.shuffle(&mut rng);
    let mut used: HashSet<usize> = HashSet::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    'groups: for &g in &group_order {
        if pairs.len() == config.n_rules {
            break;
        }
        let sources: Vec<usize> = members[g]
            .iter()
            .copied()
            .filter(|i| !used.contains(i))
            .collect();
        let targets: Vec<usize> = (0..n)
            .filter(|&i| groups[i] != g && !used.contains(&i))
            .collect();
        let (Some(_), Some(&target)) = (sources.first(), targets.choose(&mut rng)) else {
            continue;
        };
        used.insert(target);
        for s in sources {
            if pairs.len() == config.n_rules {
                break 'groups;
            }
            used.insert(s);
            pairs.push((s, target));
        }
    }
    if pairs.len() < config.n_rules {
        return Err(Error::Config(format!(
            "cannot place {} rules over {n} ingredients in {} groups (placed {})",
            config.n_rules,
            config.n_classes,
            pairs.len()
        )));
    }
    pairs.shuffle(&mut rng);
    let zipf: Vec<f64> = (1..=pairs.len())
        .map(|r| (r as f64).powf(-config.skew))
        .collect();
    let total: f64 = zipf.iter().sum();
    let rules: Vec<Rule> = pairs
        .iter()
        .zip(&zipf)
        .map(|(&(s, t), w)| Rule {
            source: IngredientId(s as u32),
            target: IngredientId(t as u32),
            probability: w / total,
        })
        .collect();

    // Recipes, making sure every rule source shows up somewhere.
    let lo = MIN_RECIPE.min(n);
    let hi = MAX_RECIPE.min(n);
    let mut recipes: Vec<BTreeSet<usize>> = (0..config.n_recipes)
        .map(|_| {
            let size = rng.gen_range(lo..=hi);
            rand::seq::index::sample(&mut rng, n, size)
                .into_iter()
                .collect()
        })
        .collect();
    for &(s, _) in &pairs {
        if !recipes.iter().any(|r| r.contains(&s)) {
            let k = rng.gen_range(0..recipes.len());
            recipes[k].insert(s);
        }
    }
    let containing: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(s, _)| {
            (0..recipes.len())
                .filter(|&k| recipes[k].contains(&s))
                .collect()
        })
        .collect();

    // Examples.
    let picker = WeightedIndex::new(&zipf).expect("positive weights");
    let mut examples = Vec::with_capacity(config.n_examples);
    for _ in 0..config.n_examples {
        let r = picker.sample(&mut rng);
        let recipe = &recipes[*containing[r]
            .choose(&mut rng)
            .expect("source placed in a recipe")];
        let (s, t) = pairs[r];
        examples.push(SubstitutionExample::new(
            recipe.iter().map(|&i| IngredientId(i as u32)),
            IngredientId(s as u32),
            IngredientId(t as u32),
        )?);
    }
    let n_train = config.n_examples * 7 / 10;
    let n_val = config.n_examples * 15 / 100;
    let test = examples.split_off(n_train + n_val);
    let validation = examples.split_off(n_train);
    let dataset = Dataset {
        train: examples,
        validation,
        test,
        recipe_corpus: None,
    };

    Ok(SynthData {
        vocab,
        dataset,
        hierarchy,
        rules,
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_words_are_unique() {
        let words: HashSet<String> = (0..20_000).map(variant_word).collect();
        assert_eq!(words.len(), 20_000);
    }

    #[test]
    fn default_split_sizes() {
        let d = generate(&SynthConfig::default()).unwrap();
        assert_eq!(d.dataset.train.len(), 2000);
        assert_eq!(d.dataset.validation.len(), 428);
        assert_eq!(d.dataset.test.len(), 430);
        assert_eq!(d.rules.len(), 20);
        let p: f64 = d.rules.iter().map(|r| r.probability).sum();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rule_equivalent_sources_share_a_group() {
        let d = generate(&SynthConfig::default()).unwrap();
        for a in &d.rules {
            for b in &d.rules {
                if a.target == b.target {
                    assert_eq!(d.groups[a.source.index()], d.groups[b.source.index()]);
                }
            }
            assert_ne!(d.groups[a.source.index()], d.groups[a.target.index()]);
        }
        let sources: HashSet<_> = d.rules.iter().map(|r| r.source).collect();
        assert_eq!(sources.len(), d.rules.len());
    }

    #[test]
    fn examples_follow_rules() {
        let d = generate(&SynthConfig::default()).unwrap();
        for split in crate::corpus::Split::ALL {
            for e in d.dataset.split(split) {
                assert_eq!(d.target_of(e.source), Some(e.target));
                assert!(e.recipe().len() >= 2 && e.recipe().contains(&e.source));
            }
        }
    }

    #[test]
    fn infeasible_configs() {
        let too_many = SynthConfig {
            n_ingredients: 3,
            n_classes: 1,
            n_rules: 7,
            ..Default::default()
        };
        assert!(generate(&too_many).is_err());
        let one_group = SynthConfig {
            n_ingredients: 10,
            n_classes: 1,
            n_rules: 3,
            ..Default::default()
        };
        assert!(generate(&one_group).is_err());
        let negative = SynthConfig {
            skew: -1.0,
            ..Default::default()
        };
        assert!(generate(&negative).is_err());
    }
}
