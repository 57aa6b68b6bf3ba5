use std::collections::BTreeMap;
use std::fs;

use subteach::corpus::{filter_degenerate, load_dataset, IngredientId, Split, Vocabulary};
use subteach::knowledge::ClassHierarchy;
use subteach::synth::{generate, SynthConfig};

/// Chi-square critical value for 19 degrees of freedom at p = 0.001.
const CHI2_DF19_P001: f64 = 43.820;

fn config(skew: f64, seed: u64) -> SynthConfig {
    SynthConfig {
        n_examples: 2000,
        n_rules: 20,
        skew,
        seed,
        ..SynthConfig::default()
    }
}

/// Example counts per rule, most probable rule first.
fn rule_counts(skew: f64, seed: u64) -> Vec<(f64, usize)> {
    let data = generate(&config(skew, seed)).unwrap();
    let mut counts: BTreeMap<(IngredientId, IngredientId), usize> = BTreeMap::new();
    for split in Split::ALL {
        for e in data.dataset.split(split) {
            *counts.entry((e.source, e.target)).or_default() += 1;
        }
    }
    let mut rows: Vec<(f64, usize)> = data
        .rules
        .iter()
        .map(|r| {
            (
                r.probability,
                counts.get(&(r.source, r.target)).copied().unwrap_or(0),
            )
        })
        .collect();
    assert_eq!(
        rows.iter().map(|r| r.1).sum::<usize>(),
        2000,
        "every example follows a rule"
    );
    rows.sort_by(|a, b| b.0.total_cmp(&a.0));
    rows
}

fn chi_square(observed: &[usize], probabilities: &[f64]) -> f64 {
    let n: usize = observed.iter().sum();
    observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = n as f64 * p;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn rule_frequencies_follow_zipf_one() {
    let harmonic: f64 = (1..=20).map(|k| 1.0 / k as f64).sum();
    let zipf: Vec<f64> = (1..=20).map(|k| 1.0 / k as f64 / harmonic).collect();
    for seed in 0..3 {
        let rows = rule_counts(1.0, seed);
        for ((p, _), z) in rows.iter().zip(&zipf) {
            assert!(
                (p - z).abs() < 1e-12,
                "declared probability {p} vs Zipf {z}"
            );
        }
        let observed: Vec<usize> = rows.iter().map(|r| r.1).collect();
        let chi2 = chi_square(&observed, &zipf);
        assert!(chi2 < CHI2_DF19_P001, "seed {seed}: chi-square {chi2:.2}");
    }
}

#[test]
fn zero_skew_is_uniform() {
    let uniform = vec![1.0 / 20.0; 20];
    let rows = rule_counts(0.0, 4);
    let observed: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let chi2 = chi_square(&observed, &uniform);
    assert!(chi2 < CHI2_DF19_P001, "chi-square {chi2:.2}");
}

#[test]
fn same_seed_writes_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = generate(&config(1.0, 8))
        .unwrap()
        .write_files(a.path())
        .unwrap();
    let fb = generate(&config(1.0, 8))
        .unwrap()
        .write_files(b.path())
        .unwrap();
    for (x, y) in [
        (&fa.vocab, &fb.vocab),
        (&fa.dataset, &fb.dataset),
        (&fa.classes, &fb.classes),
        (&fa.edges, &fb.edges),
        (&fa.rules, &fb.rules),
    ] {
        assert_eq!(
            fs::read(x).unwrap(),
            fs::read(y).unwrap(),
            "{}",
            x.display()
        );
    }
    let other = tempfile::tempdir().unwrap();
    let fc = generate(&config(1.0, 9))
        .unwrap()
        .write_files(other.path())
        .unwrap();
    assert_ne!(
        fs::read(&fa.dataset).unwrap(),
        fs::read(&fc.dataset).unwrap()
    );
}

#[test]
fn generated_files_round_trip_without_filter_removals() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(&SynthConfig::default()).unwrap();
    let files = data.write_files(dir.path()).unwrap();

    let vocab = Vocabulary::load(&files.vocab).unwrap();
    assert_eq!(vocab.names(), data.vocab.names());
    let loaded = load_dataset(&files.dataset, &vocab).unwrap();
    for split in Split::ALL {
        assert_eq!(loaded.split(split), data.dataset.split(split));
        assert!(loaded
            .split(split)
            .iter()
            .all(|e| e.recipe().contains(&e.source) && e.recipe().len() >= 2));
    }
    let (_, report) = filter_degenerate(loaded);
    assert_eq!(report.total(), 0);

    let hierarchy = ClassHierarchy::load(&files.classes, &files.edges).unwrap();
    assert_eq!(hierarchy.len(), data.hierarchy.len());
}
