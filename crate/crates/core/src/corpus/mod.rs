//! Vocabulary, substitution examples, and dataset splits.
//!
//! Datasets are JSONL files with one object per line:
//!
//! ```text
//! {"split": "train", "recipe": ["salt", "tomato", "pepper"], "source": "salt", "target": "sea_salt"}
//! ```
//!
//! Every ingredient name is canonicalized and resolved against a [`Vocabulary`];
//! names that do not resolve are a hard error.

mod vocab;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use vocab::{canonicalize, AliasMap, IngredientId, Vocabulary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "validation" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(Error::Data(format!("unknown split `{other}`"))),
        }
    }
}

/// One teaching example: in a recipe, `source` was replaced by `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubstitutionExample {
    recipe: Vec<IngredientId>,
    pub source: IngredientId,
    pub target: IngredientId,
}

impl SubstitutionExample {
    /// Recipe ingredients are treated as a set. The source must be one of them.
    pub fn new(
        recipe: impl IntoIterator<Item = IngredientId>,
        source: IngredientId,
        target: IngredientId,
    ) -> Result<Self> {
        let recipe: Vec<IngredientId> = recipe
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if recipe.binary_search(&source).is_err() {
            return Err(Error::Data(format!(
                "source ingredient {source} is not part of the recipe"
            )));
        }
        Ok(SubstitutionExample {
            recipe,
            source,
            target,
        })
    }

    /// Recipe ingredients in ascending id order, source included.
    pub fn recipe(&self) -> &[IngredientId] {
        &self.recipe
    }

    /// The recipe context without the source ingredient.
    pub fn remaining(&self) -> impl Iterator<Item = IngredientId> + '_ {
        let source = self.source;
        self.recipe.iter().copied().filter(move |&i| i != source)
    }

    pub fn is_degenerate(&self) -> bool {
        self.recipe.len() < 2
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub train: Vec<SubstitutionExample>,
    pub validation: Vec<SubstitutionExample>,
    pub test: Vec<SubstitutionExample>,
    /// Recipes used for descriptive-weight statistics. `None` means the training recipes.
    pub recipe_corpus: Option<Vec<Vec<IngredientId>>>,
}

impl Dataset {
    pub fn split(&self, split: Split) -> &[SubstitutionExample] {
        match split {
            Split::Train => &self.train,
            Split::Validation => &self.validation,
            Split::Test => &self.test,
        }
    }

    fn split_mut(&mut self, split: Split) -> &mut Vec<SubstitutionExample> {
        match split {
            Split::Train => &mut self.train,
            Split::Validation => &mut self.validation,
            Split::Test => &mut self.test,
        }
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.validation.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distinct recipes used for descriptive weights.
    ///
    /// Without an explicit corpus these are the training recipes, with identical
    /// ingredient sets counted once since several examples can share a recipe.
    pub fn recipe_corpus(&self) -> Vec<Vec<IngredientId>> {
        if let Some(corpus) = &self.recipe_corpus {
            return corpus.clone();
        }
        let mut seen = HashSet::new();
        self.train
            .iter()
            .filter(|e| seen.insert(e.recipe()))
            .map(|e| e.recipe().to_vec())
            .collect()
    }

    pub fn save(&self, path: &Path, vocab: &Vocabulary) -> Result<()> {
        let mut out = Vec::new();
        for split in Split::ALL {
            for e in self.split(split) {
                let line = RawExample {
                    split,
                    recipe: e
                        .recipe()
                        .iter()
                        .map(|&i| vocab.name(i).to_string())
                        .collect(),
                    source: vocab.name(e.source).to_string(),
                    target: vocab.name(e.target).to_string(),
                };
                serde_json::to_writer(&mut out, &line).expect("serialize example");
                out.push(b'\n');
            }
        }
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&out).map_err(|e| Error::io(path, e))
    }
}

#[derive(Serialize, Deserialize)]
struct RawExample {
    split: Split,
    recipe: Vec<String>,
    source: String,
    target: String,
}

/// Loads a JSONL dataset, keeping file order within each split.
pub fn load_dataset(path: &Path, vocab: &Vocabulary) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut dataset = Dataset::default();
    let mut unknown: Vec<(usize, String)> = Vec::new();
    let mut reported = HashSet::new();

    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawExample =
            serde_json::from_str(line).map_err(|e| Error::parse(path, lineno, e.to_string()))?;

        let mut resolve = |name: &str| -> Option<IngredientId> {
            let id = vocab.resolve(name);
            if id.is_none() && reported.insert(name.to_string()) {
                unknown.push((lineno, name.to_string()));
            }
            id
        };
        let recipe: Vec<Option<IngredientId>> = raw.recipe.iter().map(|n| resolve(n)).collect();
        let source = resolve(&raw.source);
        let target = resolve(&raw.target);

        let (Some(source), Some(target)) = (source, target) else {
            continue;
        };
        let Some(recipe) = recipe.into_iter().collect::<Option<Vec<_>>>() else {
            continue;
        };
        let example = SubstitutionExample::new(recipe, source, target).map_err(|_| {
            Error::parse(
                path,
                lineno,
                format!("source `{}` is not in the recipe", raw.source),
            )
        })?;
        dataset.split_mut(raw.split).push(example);
    }

    if !unknown.is_empty() {
        return Err(Error::UnknownIngredients {
            path: path.to_path_buf(),
            names: unknown,
        });
    }
    Ok(dataset)
}

/// Per-split counts of examples removed by [`filter_degenerate`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl FilterReport {
    pub fn total(&self) -> usize {
        self.train + self.validation + self.test
    }
}

/// Drops examples whose recipe consists of the source ingredient alone.
pub fn filter_degenerate(mut dataset: Dataset) -> (Dataset, FilterReport) {
    let mut report = FilterReport::default();
    for split in Split::ALL {
        let examples = dataset.split_mut(split);
        let before = examples.len();
        examples.retain(|e| !e.is_degenerate());
        let removed = before - examples.len();
        match split {
            Split::Train => report.train = removed,
            Split::Validation => report.validation = removed,
            Split::Test => report.test = removed,
        }
    }
    (dataset, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::from_names(["salt", "tomato", "pepper", "sea_salt", "butter", "flour"]).unwrap()
    }

    fn write(text: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("data.jsonl");
        fs::write(&p, text).unwrap();
        (dir, p)
    }

    #[test]
    fn loads_schema_instance() {
        let (_d, p) = write(
            r#"{"split":"train","recipe":["salt","tomato","pepper"],"source":"salt","target":"sea_salt"}"#,
        );
        let ds = load_dataset(&p, &vocab()).unwrap();
        assert_eq!(ds.train.len(), 1);
        let e = &ds.train[0];
        assert_eq!(e.source, IngredientId(0));
        assert_eq!(e.target, IngredientId(3));
        assert!(e.recipe().contains(&e.source));
        assert_eq!(
            e.remaining().collect::<Vec<_>>(),
            vec![IngredientId(1), IngredientId(2)]
        );
    }

    #[test]
    fn empty_file_gives_empty_splits() {
        let (_d, p) = write("");
        let ds = load_dataset(&p, &vocab()).unwrap();
        assert!(ds.train.is_empty() && ds.validation.is_empty() && ds.test.is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let (_d, p) = write(concat!(
            r#"{"split":"train","recipe":["salt","tomato"],"source":"salt","target":"sea_salt"}"#,
            "\n{not json\n"
        ));
        match load_dataset(&p, &vocab()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_listed() {
        let (_d, p) = write(concat!(
            r#"{"split":"train","recipe":["salt","saffron"],"source":"salt","target":"sea_salt"}"#,
            "\n",
            r#"{"split":"test","recipe":["salt","tomato"],"source":"salt","target":"truffle"}"#,
        ));
        match load_dataset(&p, &vocab()) {
            Err(Error::UnknownIngredients { names, .. }) => {
                assert_eq!(
                    names,
                    vec![(1, "saffron".to_string()), (2, "truffle".to_string())]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn source_outside_recipe_is_rejected() {
        let (_d, p) =
            write(r#"{"split":"train","recipe":["tomato"],"source":"salt","target":"sea_salt"}"#);
        assert!(matches!(
            load_dataset(&p, &vocab()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn filter_removes_source_only_recipes() {
        let v = vocab();
        let butter = v.get("butter").unwrap();
        let flour = v.get("flour").unwrap();
        let salt = v.get("salt").unwrap();
        let ds = Dataset {
            train: vec![
                SubstitutionExample::new([butter], butter, salt).unwrap(),
                SubstitutionExample::new([butter, flour], butter, salt).unwrap(),
            ],
            validation: vec![SubstitutionExample::new([butter, butter], butter, salt).unwrap()],
            test: vec![],
            recipe_corpus: None,
        };
        let (ds, report) = filter_degenerate(ds);
        assert_eq!(
            report,
            FilterReport {
                train: 1,
                validation: 1,
                test: 0
            }
        );
        assert_eq!(ds.train.len(), 1);
        assert_eq!(ds.train[0].recipe(), &[butter, flour]);
    }

    #[test]
    fn duplicates_retained_and_recipe_corpus_deduplicated() {
        let v = vocab();
        let ids: Vec<_> = v.ids().collect();
        let e = SubstitutionExample::new([ids[0], ids[1]], ids[0], ids[3]).unwrap();
        let f = SubstitutionExample::new([ids[0], ids[1]], ids[1], ids[2]).unwrap();
        let ds = Dataset {
            train: vec![e.clone(), e, f],
            ..Default::default()
        };
        assert_eq!(ds.train.len(), 3);
        assert_eq!(ds.recipe_corpus(), vec![vec![ids[0], ids[1]]]);
    }
}
