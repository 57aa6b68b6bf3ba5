use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of an ingredient in a [`Vocabulary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IngredientId(pub u32);

impl IngredientId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for IngredientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Lowercase, trim, and collapse internal whitespace runs to a single underscore.
pub fn canonicalize(raw: &str) -> String {
    raw.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

/// Optional `raw_name -> canonical_name` rewrites applied before vocabulary lookup.
#[derive(Clone, Debug, Default)]
pub struct AliasMap {
    map: HashMap<String, String>,
}

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, raw: &str, canonical: &str) {
        self.map.insert(canonicalize(raw), canonicalize(canonical));
    }

    pub fn get(&self, canonical_raw: &str) -> Option<&str> {
        self.map.get(canonical_raw).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Reads a `raw_name<TAB>canonical_name` file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut aliases = AliasMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (raw, canonical) = line.split_once('\t').ok_or_else(|| {
                Error::parse(path, n + 1, "expected `raw_name<TAB>canonical_name`")
            })?;
            aliases.insert(raw, canonical);
        }
        Ok(aliases)
    }
}

/// The shared, integer-indexed ingredient symbol set.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, IngredientId>,
    aliases: AliasMap,
}

impl Vocabulary {
    /// Builds a vocabulary from names in id order. Names are canonicalized and must stay unique.
    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocabulary::default();
        for raw in names {
            let name = canonicalize(raw.as_ref());
            if name.is_empty() {
                return Err(Error::Data(format!(
                    "empty ingredient name at id {}",
                    vocab.len()
                )));
            }
            let id = IngredientId(vocab.names.len() as u32);
            if vocab.index.insert(name.clone(), id).is_some() {
                return Err(Error::Data(format!("duplicate ingredient name `{name}`")));
            }
            vocab.names.push(name);
        }
        Ok(vocab)
    }

    /// Reads an `id<TAB>name` file; ids must cover `0..n` exactly once.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut rows: Vec<(usize, u32, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (id, name) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, n + 1, "expected `id<TAB>name`"))?;
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, n + 1, format!("bad ingredient id `{id}`")))?;
            rows.push((n + 1, id, name.to_string()));
        }
        rows.sort_by_key(|r| r.1);
        for (expected, (line, id, _)) in rows.iter().enumerate() {
            if *id as usize != expected {
                return Err(Error::parse(
                    path,
                    *line,
                    format!("ingredient ids must be dense from 0; expected {expected}, found {id}"),
                ));
            }
        }
        Self::from_names(rows.into_iter().map(|r| r.2))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            writeln!(out, "{i}\t{name}").expect("write to Vec");
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn with_aliases(mut self, aliases: AliasMap) -> Self {
        self.aliases = aliases;
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: IngredientId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = IngredientId> + '_ {
        (0..self.names.len() as u32).map(IngredientId)
    }

    /// Looks up an already-canonical name, ignoring aliases.
    pub fn get(&self, canonical: &str) -> Option<IngredientId> {
        self.index.get(canonical).copied()
    }

    /// Canonicalizes `raw`, applies the alias map, then looks the result up.
    pub fn resolve(&self, raw: &str) -> Option<IngredientId> {
        let canonical = canonicalize(raw);
        match self.aliases.get(&canonical) {
            Some(target) => self.get(target),
            None => self.get(&canonical),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization_rules() {
        assert_eq!(canonicalize("  Sea   Salt "), "sea_salt");
        assert_eq!(canonicalize("sea_salt"), "sea_salt");
        assert_eq!(canonicalize("Olive\tOil"), "olive_oil");
        assert_eq!(canonicalize(""), "");
    }

    #[test]
    fn duplicate_after_canonicalization_is_rejected() {
        let err = Vocabulary::from_names(["Sea Salt", "sea_salt"]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn aliases_resolve_before_direct_lookup() {
        let mut aliases = AliasMap::new();
        aliases.insert("Kosher Salt", "salt");
        let vocab = Vocabulary::from_names(["salt", "kosher_salt", "butter"])
            .unwrap()
            .with_aliases(aliases);
        assert_eq!(vocab.resolve("KOSHER salt"), Some(IngredientId(0)));
        assert_eq!(vocab.resolve("Butter"), Some(IngredientId(2)));
        assert_eq!(vocab.resolve("lard"), None);
    }

    #[test]
    fn tsv_ids_must_be_dense() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.tsv");
        fs::write(&p, "1\tbutter\n0\tsalt\n").unwrap();
        let v = Vocabulary::load(&p).unwrap();
        assert_eq!(v.name(IngredientId(0)), "salt");
        fs::write(&p, "0\tsalt\n2\tbutter\n").unwrap();
        assert!(matches!(
            Vocabulary::load(&p),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
