//! Structure-preserving perturbations of knowledge-graph completion
//! datasets, plus the evaluation, baseline and diagnostics around them.

pub mod analysis;
pub mod cli;
pub mod convert;
pub mod derangement;
pub mod error;
pub mod eval;
pub mod kg;
pub mod rewriter;
pub mod rng;
pub mod synthetic;
pub mod textgen;
pub mod transe;
pub mod transform;

pub use error::{Error, ErrorClass, Result};
pub use kg::{load_dataset, write_dataset, KnowledgeGraph, Split, Triple};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
