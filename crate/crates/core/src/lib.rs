//! Incremental teaching simulator for ingredient substitution.
//!
//! A simulated tutor feeds `(recipe, source, target)` examples to a learner one at a
//! time; the learner ranks candidate targets for held-out queries and the simulator
//! records hit@1, hit@10 and MRR along a learning curve.
//!
//! The pieces:
//!
//! - [`corpus`]: vocabulary, alias map, dataset loading and degenerate-example filtering.
//! - [`knowledge`]: tf-idf linking of ingredient names to ontology classes and
//!   superclass expansion into weighted properties.
//! - [`representation`]: one-hot, knowledge-enriched and dense ingredient vectors, and
//!   query vectors built from the source and its recipe context.
//! - [`learners`]: frequency baseline, prototype and accumulative learners.
//! - [`tutoring`]: random and balanced example orders.
//! - [`evaluation`]: ranking metrics, learning curves, multi-run aggregation.
//! - [`synth`]: synthetic datasets with a known ground truth.
//! - [`runner`]: configuration and end-to-end experiments.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod knowledge;
pub mod learners;
pub mod representation;
pub mod runner;
pub mod synth;
pub mod tutoring;
pub mod vector;

pub use corpus::{Dataset, IngredientId, Split, SubstitutionExample, Vocabulary};
pub use error::{Error, ErrorKind, Result};
pub use learners::{new_learner, Learner, LearnerKind, Similarity};
pub use representation::{ReprMode, RepresentationProvider};
pub use runner::{run_experiment, ExperimentConfig};
pub use tutoring::Policy;
pub use vector::{FeatureVector, SparseVector};
